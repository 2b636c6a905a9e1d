#include "vironment/ppi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace vironment {

std::uint8_t color_of(std::optional<double> distance_m, const SonarSpec& spec) {
  if (!distance_m) return 0;
  const double d = std::clamp(*distance_m, spec.min_range, spec.max_range);
  const double level = 255.0 * (spec.max_range - d) / (spec.max_range - spec.min_range);
  return static_cast<std::uint8_t>(std::lround(level));
}

PpiFrame build_ppi(const ScanFrame& frame, const SonarSpec& spec) {
  PpiFrame ppi;
  ppi.seq = frame.seq;
  for (int i = 0; i < kSensorCount; ++i) {
    const auto d = to_meters(frame.readings[i]);
    auto& s = ppi.sectors[i];
    s.dodecant = frame.dodecant(i);
    s.radius_fraction = d ? std::min(1.0, *d / spec.max_range) : 1.0;
    s.green = color_of(d, spec);
  }
  return ppi;
}

namespace {

constexpr double kRadPerDeg = std::numbers::pi / 180.0;

// Fixed-precision number formatting keeps the output byte-stable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

// Screen point for a clockwise bearing (0 = up) at radius r.
void polar_point(double cx, double cy, double r, double bearing_deg, double& x, double& y) {
  const double a = bearing_deg * kRadPerDeg;
  x = cx + r * std::sin(a);
  y = cy - r * std::cos(a);
}

}  // namespace

std::string render_svg(const PpiFrame& ppi, int size_px) {
  if (size_px < kMinSvgSize) {
    throw std::invalid_argument("svg size must be at least 64 px");
  }
  const double size = size_px;
  const double c = size / 2.0;
  const double rim = c;
  const std::string sz = std::to_string(size_px);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + sz + "\" height=\"" + sz +
         "\" viewBox=\"0 0 " + sz + " " + sz + "\">\n";
  out += "<title>PPI seq " + std::to_string(ppi.seq) + "</title>\n";
  out += "<rect width=\"" + sz + "\" height=\"" + sz + "\" fill=\"rgb(32,32,32)\"/>\n";
  out += "<g id=\"sectors\" stroke=\"none\">\n";
  for (const auto& s : ppi.sectors) {
    const double center = bearing_of(s.dodecant);
    const double r = s.radius_fraction * rim;
    double x0, y0, x1, y1;
    polar_point(c, c, r, center - kDodecantWidthDeg / 2.0, x0, y0);
    polar_point(c, c, r, center + kDodecantWidthDeg / 2.0, x1, y1);
    out += "<path data-clock=\"" + std::to_string(s.dodecant.clock_position()) + "\" d=\"M " +
           num(c) + " " + num(c) + " L " + num(x0) + " " + num(y0) + " A " + num(r) + " " +
           num(r) + " 0 0 1 " + num(x1) + " " + num(y1) + " Z\" fill=\"rgb(0," +
           std::to_string(s.green) + ",0)\"/>\n";
  }
  out += "</g>\n";
  out += "<g id=\"numerals\" fill=\"white\" font-family=\"sans-serif\" font-size=\"" +
         num(size / 20.0) + "\" text-anchor=\"middle\" dominant-baseline=\"middle\">\n";
  for (int clock = 1; clock <= kSensorCount; ++clock) {
    double x, y;
    polar_point(c, c, rim * 0.92, bearing_of(DodecantIndex(clock)), x, y);
    out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\">" + std::to_string(clock) +
           "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace vironment

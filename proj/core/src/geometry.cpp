#include "vironment/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vironment {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

double normalize_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative value lands on exactly 360 after the shift.
  if (r >= 360.0) r = 0.0;
  return r;
}

double circular_difference(double a, double b) {
  double d = normalize_degrees(a - b);
  return d > 180.0 ? d - 360.0 : d;
}

DodecantIndex::DodecantIndex(int clock_position) : clock_position_(clock_position) {
  if (clock_position < 1 || clock_position > kSensorCount) {
    throw std::invalid_argument("clock position must be in 1..12, got " +
                                std::to_string(clock_position));
  }
}

DodecantIndex DodecantIndex::from_slot(int slot) {
  if (slot < 0 || slot >= kSensorCount) {
    throw std::invalid_argument("ring slot must be in 0..11, got " + std::to_string(slot));
  }
  return DodecantIndex(slot == 0 ? kSensorCount : slot);
}

WearerPose::WearerPose(double x_m, double y_m, double heading_deg)
    : x(x_m), y(y_m), heading(normalize_degrees(heading_deg)) {
  require_finite(x_m, "wearer x");
  require_finite(y_m, "wearer y");
  require_finite(heading_deg, "wearer heading");
}

DodecantIndex dodecant_of(double bearing_deg) {
  require_finite(bearing_deg, "bearing");
  const double b = normalize_degrees(bearing_deg);
  const int slot =
      static_cast<int>(std::floor((b + kDodecantWidthDeg / 2.0) / kDodecantWidthDeg)) % kSensorCount;
  return DodecantIndex::from_slot(slot);
}

double bearing_of(DodecantIndex d) { return kDodecantWidthDeg * d.slot(); }

PolarTarget to_egocentric(const WearerPose& pose, Vec2 world_point) {
  require_finite(world_point.x, "point x");
  require_finite(world_point.y, "point y");
  const double dx = world_point.x - pose.x;
  const double dy = world_point.y - pose.y;
  const double range = std::hypot(dx, dy);
  if (range == 0.0) return {0.0, 0.0};
  const double world_angle = std::atan2(dy, dx) * kDegPerRad;
  return {range, normalize_degrees(pose.heading - world_angle)};
}

Vec2 to_world(const WearerPose& pose, PolarTarget target) {
  const double world_angle = (pose.heading - target.bearing) / kDegPerRad;
  return {pose.x + target.range * std::cos(world_angle),
          pose.y + target.range * std::sin(world_angle)};
}

}  // namespace vironment

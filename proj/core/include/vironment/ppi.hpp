#pragma once

// Plan Position Indicator: one pie sector per dodecant. A nearer neighbor
// draws a shorter, brighter sector; no echo draws a full-radius black one.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "vironment/geometry.hpp"
#include "vironment/mux.hpp"
#include "vironment/sonar.hpp"

namespace vironment {

struct PpiSector {
  DodecantIndex dodecant{12};
  double radius_fraction = 1.0;  // 1 = display edge = max_range
  std::uint8_t green = 0;

  friend bool operator==(const PpiSector&, const PpiSector&) = default;
};

struct PpiFrame {
  std::uint16_t seq = 0;
  std::array<PpiSector, kSensorCount> sectors{};  // indexed by ring slot

  const PpiSector& at(DodecantIndex d) const { return sectors[d.slot()]; }

  friend bool operator==(const PpiFrame&, const PpiFrame&) = default;
};

/// Linear green ramp: 255 at min_range down to 0 at max_range; 0 for no echo.
std::uint8_t color_of(std::optional<double> distance_m, const SonarSpec& spec);

PpiFrame build_ppi(const ScanFrame& frame, const SonarSpec& spec);

inline constexpr int kMinSvgSize = 64;

/// Square SVG with 12 o'clock pointing up. Throws for size_px < 64.
std::string render_svg(const PpiFrame& ppi, int size_px);

}  // namespace vironment

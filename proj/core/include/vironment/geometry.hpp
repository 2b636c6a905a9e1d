#pragma once

// Egocentric geometry for a 12-sensor ring laid out like a clock face.
//
// Two angle conventions meet here:
//   * world headings are mathematical: degrees counterclockwise from +x;
//   * egocentric bearings are clock-like: degrees clockwise from the
//     wearer's forward direction, viewed from above.
// Clock position 12 is forward, 3 is to the wearer's right, 6 is behind.

#include <compare>
#include <cstdint>

namespace vironment {

inline constexpr int kSensorCount = 12;
inline constexpr double kDodecantWidthDeg = 360.0 / kSensorCount;

/// Wraps any finite angle into [0, 360).
double normalize_degrees(double deg);

/// Signed smallest difference a - b, in (-180, 180].
double circular_difference(double a, double b);

class DodecantIndex {
 public:
  /// Throws std::invalid_argument unless 1 <= clock_position <= 12.
  explicit DodecantIndex(int clock_position);

  /// Ring slot 0..11 (slot 0 is 12 o'clock, then clockwise).
  static DodecantIndex from_slot(int slot);

  int clock_position() const { return clock_position_; }
  int slot() const { return clock_position_ % kSensorCount; }

  friend bool operator==(DodecantIndex, DodecantIndex) = default;
  friend auto operator<=>(DodecantIndex, DodecantIndex) = default;

 private:
  int clock_position_;
};

struct WearerPose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // degrees CCW from world +x, kept in [0, 360)

  WearerPose() = default;
  WearerPose(double x_m, double y_m, double heading_deg);

  friend bool operator==(const WearerPose&, const WearerPose&) = default;
};

struct PolarTarget {
  double range = 0.0;    // meters
  double bearing = 0.0;  // degrees clockwise from forward, [0, 360)
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Clock position whose half-open sector [center - 15, center + 15) holds
/// the bearing. Throws std::invalid_argument for non-finite input.
DodecantIndex dodecant_of(double bearing_deg);

/// Sector center, clockwise from forward.
double bearing_of(DodecantIndex d);

/// Range and clockwise bearing of a world point as seen by the wearer.
/// A point at the wearer origin maps to range 0, bearing 0.
PolarTarget to_egocentric(const WearerPose& pose, Vec2 world_point);

/// Inverse of to_egocentric.
Vec2 to_world(const WearerPose& pose, PolarTarget target);

}  // namespace vironment

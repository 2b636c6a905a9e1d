#pragma once

// Multiplexer routing and the sequential scan that visits the 12 sensors.
//
// Two chained 8-channel muxes carry the trigger lines (mux 0, mux 1) and two
// carry the echo lines (mux 2, mux 3). Only one sensor is selected at a time,
// so acoustic crosstalk between sensors cannot occur within a scan.

#include <array>
#include <cstdint>
#include <functional>

#include "vironment/geometry.hpp"
#include "vironment/sonar.hpp"

namespace vironment {

inline constexpr std::uint16_t kNoEcho = 0xFFFF;
inline constexpr std::uint16_t kMinReadingMm = 20;
inline constexpr std::uint16_t kMaxReadingMm = 4000;
inline constexpr double kDefaultSlotMargin = 1.676e-3;  // s

struct MuxRoute {
  int trigger_mux = 0;
  int trigger_channel = 0;
  int echo_mux = 2;
  int echo_channel = 0;

  friend bool operator==(const MuxRoute&, const MuxRoute&) = default;
};

/// Throws std::invalid_argument outside 0..11.
MuxRoute route(int sensor_index);

struct ScanTiming {
  double slot_duration = 0.0;   // s
  double cycle_duration = 0.0;  // s
  double rate_hz = 0.0;
};

/// Slot = max-range echo timeout + margin; one cycle visits all 12 slots.
ScanTiming scan_timing(const SonarSpec& spec, double margin_s = kDefaultSlotMargin);

using SensorOrder = std::array<int, kSensorCount>;

/// 12 -> 1 -> 2 -> ... -> 11.
inline constexpr SensorOrder kClockOrder = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};

struct ScanSchedule {
  double slot_duration = 0.0;
  SensorOrder sensor_order = kClockOrder;
  int current_slot = 0;

  static ScanSchedule for_spec(const SonarSpec& spec, double margin_s = kDefaultSlotMargin,
                               SensorOrder order = kClockOrder);

  double cycle_duration() const { return kSensorCount * slot_duration; }

  /// Order must be a permutation and the slot long enough for a
  /// max-range echo.
  void validate(const SonarSpec& spec) const;
};

struct SlotResult {
  int sensor_index;
  ScanSchedule schedule;
};

/// Sensor for the current slot, and the schedule advanced one slot.
SlotResult next_slot(const ScanSchedule& schedule);

struct ScanFrame {
  std::uint16_t seq = 0;
  std::array<std::uint16_t, kSensorCount> readings{};  // mm, kNoEcho when empty
  std::uint32_t timestamp_ms = 0;

  static ScanFrame empty(std::uint16_t seq = 0, std::uint32_t timestamp_ms = 0);

  /// Reading i belongs to ring slot i (i == 0 is 12 o'clock).
  DodecantIndex dodecant(int i) const { return DodecantIndex::from_slot(i); }

  /// Throws unless every non-sentinel reading lies in [20, 4000] mm.
  void validate() const;

  friend bool operator==(const ScanFrame&, const ScanFrame&) = default;
};

/// Bearing of sensor i, clockwise from forward.
inline double sensor_bearing(int sensor_index) { return kDodecantWidthDeg * sensor_index; }

std::uint16_t to_millimeters(std::optional<double> distance_m);
std::optional<double> to_meters(std::uint16_t reading_mm);

/// Called once per slot, before the sensor fires.
using SlotObserver = std::function<void(int slot, int sensor_index, const MuxRoute&)>;

/// Runs one full cycle: 12 sequential slots, each selecting one sensor
/// through its mux route, ranging, and applying noise. The schedule ends on
/// the slot it started from.
class Scanner {
 public:
  Scanner(ScanSchedule schedule, SonarSpec spec, NoiseModel noise);

  ScanFrame scan(const Scene& scene, NoiseStream& stream, std::uint32_t timestamp_ms,
                 const SlotObserver& observer = {});

  const ScanSchedule& schedule() const { return schedule_; }
  const SonarSpec& spec() const { return spec_; }
  std::uint16_t next_seq() const { return next_seq_; }
  void set_next_seq(std::uint16_t seq) { next_seq_ = seq; }

 private:
  ScanSchedule schedule_;
  SonarSpec spec_;
  NoiseModel noise_;
  std::uint16_t next_seq_ = 0;
};

}  // namespace vironment

#include "vironment/mux.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vironment {

namespace {
constexpr int kChannelsPerMux = 8;
}

MuxRoute route(int sensor_index) {
  if (sensor_index < 0 || sensor_index >= kSensorCount) {
    throw std::invalid_argument("sensor index must be in 0..11, got " +
                                std::to_string(sensor_index));
  }
  const int bank = sensor_index / kChannelsPerMux;
  const int channel = sensor_index % kChannelsPerMux;
  return {bank, channel, 2 + bank, channel};
}

ScanTiming scan_timing(const SonarSpec& spec, double margin_s) {
  if (!(margin_s >= 0.0)) throw std::invalid_argument("slot margin must be >= 0");
  ScanTiming t;
  t.slot_duration = echo_time(spec.max_range, spec) + margin_s;
  t.cycle_duration = kSensorCount * t.slot_duration;
  t.rate_hz = 1.0 / t.cycle_duration;
  return t;
}

ScanSchedule ScanSchedule::for_spec(const SonarSpec& spec, double margin_s, SensorOrder order) {
  ScanSchedule s;
  s.slot_duration = scan_timing(spec, margin_s).slot_duration;
  s.sensor_order = order;
  return s;
}

void ScanSchedule::validate(const SonarSpec& spec) const {
  SensorOrder sorted = sensor_order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != kClockOrder) {
    throw std::invalid_argument("sensor_order must be a permutation of 0..11");
  }
  if (current_slot < 0 || current_slot >= kSensorCount) {
    throw std::invalid_argument("current_slot must be in 0..11");
  }
  if (!(slot_duration >= echo_time(spec.max_range, spec))) {
    throw std::invalid_argument("slot_duration is shorter than the max-range echo timeout");
  }
}

SlotResult next_slot(const ScanSchedule& schedule) {
  SlotResult r{schedule.sensor_order[schedule.current_slot], schedule};
  r.schedule.current_slot = (schedule.current_slot + 1) % kSensorCount;
  return r;
}

ScanFrame ScanFrame::empty(std::uint16_t seq, std::uint32_t timestamp_ms) {
  ScanFrame f;
  f.seq = seq;
  f.readings.fill(kNoEcho);
  f.timestamp_ms = timestamp_ms;
  return f;
}

void ScanFrame::validate() const {
  for (auto r : readings) {
    if (r != kNoEcho && (r < kMinReadingMm || r > kMaxReadingMm)) {
      throw std::invalid_argument("reading " + std::to_string(r) + " mm outside [20, 4000]");
    }
  }
}

std::uint16_t to_millimeters(std::optional<double> distance_m) {
  if (!distance_m) return kNoEcho;
  const long mm = std::lround(*distance_m * 1000.0);
  return static_cast<std::uint16_t>(std::clamp<long>(mm, kMinReadingMm, kMaxReadingMm));
}

std::optional<double> to_meters(std::uint16_t reading_mm) {
  if (reading_mm == kNoEcho) return std::nullopt;
  return reading_mm / 1000.0;
}

Scanner::Scanner(ScanSchedule schedule, SonarSpec spec, NoiseModel noise)
    : schedule_(schedule), spec_(spec), noise_(noise) {
  spec_.validate();
  noise_.validate();
  schedule_.validate(spec_);
}

ScanFrame Scanner::scan(const Scene& scene, NoiseStream& stream, std::uint32_t timestamp_ms,
                        const SlotObserver& observer) {
  ScanFrame frame = ScanFrame::empty(next_seq_, timestamp_ms);
  for (int slot = 0; slot < kSensorCount; ++slot) {
    auto [sensor, advanced] = next_slot(schedule_);
    schedule_ = advanced;
    if (observer) observer(slot, sensor, route(sensor));
    const auto echo = first_echo(scene, sensor_bearing(sensor), spec_);
    frame.readings[sensor] = to_millimeters(apply_noise(echo, noise_, spec_, stream));
  }
  ++next_seq_;
  return frame;
}

}  // namespace vironment

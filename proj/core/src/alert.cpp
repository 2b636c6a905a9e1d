#include "vironment/alert.hpp"

#include <algorithm>
#include <stdexcept>

namespace vironment {

void AlertConfig::validate() const {
  if (!(threshold > 0.0)) throw std::invalid_argument("alert threshold must be positive");
  if (!(release_threshold >= threshold)) {
    throw std::invalid_argument("release_threshold must be >= threshold");
  }
  if (trigger_count < 1 || release_count < 1) {
    throw std::invalid_argument("alert counts must be >= 1");
  }
}

bool frame_violates(const ScanFrame& frame, double threshold_m) {
  return std::any_of(frame.readings.begin(), frame.readings.end(), [&](std::uint16_t r) {
    return r != kNoEcho && r / 1000.0 < threshold_m;
  });
}

bool frame_clear(const ScanFrame& frame, double release_threshold_m) {
  return std::all_of(frame.readings.begin(), frame.readings.end(), [&](std::uint16_t r) {
    return r == kNoEcho || r / 1000.0 >= release_threshold_m;
  });
}

AlertStep step_alert(const AlertState& state, const ScanFrame& frame, const AlertConfig& cfg) {
  AlertState next = state;
  bool on = state.led_on;

  if (!on) {
    if (frame_violates(frame, cfg.threshold)) {
      ++next.violate_streak;
      next.clear_streak = 0;
    } else {
      next.violate_streak = 0;
      ++next.clear_streak;
    }
    if (next.violate_streak >= cfg.trigger_count) {
      on = true;
      next.violate_streak = 0;
      next.clear_streak = 0;
    }
  } else {
    if (frame_clear(frame, cfg.release_threshold)) {
      ++next.clear_streak;
      next.violate_streak = 0;
    } else {
      next.clear_streak = 0;
      ++next.violate_streak;
    }
    if (next.clear_streak >= cfg.release_count) {
      on = false;
      next.violate_streak = 0;
      next.clear_streak = 0;
    }
  }

  next.led_on = on;
  next.horn_on = on;
  return {next, {on, on}};
}

}  // namespace vironment

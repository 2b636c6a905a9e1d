#pragma once

#include <cstdint>

#include "vironment/mux.hpp"

namespace vironment {

struct AlertConfig {
  double threshold = 2.0;          // m, a reading below this violates
  int trigger_count = 2;           // consecutive violating frames to switch on
  int release_count = 3;           // consecutive clear frames to switch off
  double release_threshold = 2.2;  // m, while on every reading must reach this

  void validate() const;
};

struct AlertOutputs {
  bool led = false;
  bool horn = false;

  friend bool operator==(const AlertOutputs&, const AlertOutputs&) = default;
};

// LED and horn share one level; they are never driven separately.
struct AlertState {
  bool led_on = false;
  bool horn_on = false;
  int violate_streak = 0;
  int clear_streak = 0;

  bool active() const { return led_on; }
  friend bool operator==(const AlertState&, const AlertState&) = default;
};

struct AlertStep {
  AlertState state;
  AlertOutputs outputs;
};

/// True when any reading is closer than `threshold_m`. No-echo never counts.
bool frame_violates(const ScanFrame& frame, double threshold_m);

/// True when every reading is no-echo or at least `release_threshold_m`.
bool frame_clear(const ScanFrame& frame, double release_threshold_m);

AlertStep step_alert(const AlertState& state, const ScanFrame& frame, const AlertConfig& cfg);

}  // namespace vironment

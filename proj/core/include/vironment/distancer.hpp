#pragma once

// Monocular distance from person bounding boxes (pinhole camera plus a
// body-height prior) and the traffic-light screen state.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vironment/sonar.hpp"

namespace vironment::distancer {

// 6 ft and 7 ft. Written out because 6 * 0.3048 rounds above 1.8288.
inline constexpr double kRedBelow = 1.8288;
inline constexpr double kYellowBelow = 2.1336;
inline constexpr double kDefaultMinConfidence = 0.5;
inline constexpr std::string_view kPersonLabel = "person";

struct Detection {
  double bbox_top = 0.0;
  double bbox_bottom = 0.0;
  double bbox_left = 0.0;
  double bbox_right = 0.0;
  double confidence = 0.0;
  std::string class_label;

  double height_px() const { return bbox_bottom - bbox_top; }
  void validate() const;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct Calibration {
  double focal_length = 1000.0;  // px
  double person_height = 1.65;   // m

  void validate() const;
};

enum class ScreenState { kGreen, kYellow, kRed };

std::string_view to_string(ScreenState s);

/// focal_length * person_height / box height. Throws for a non-positive box.
double estimate_distance(const Detection& det, const Calibration& cal);

/// Red below 6 ft, yellow in [6 ft, 7 ft), green from 7 ft on.
ScreenState screen_state(double distance_m);

struct FrameResult {
  ScreenState state = ScreenState::kGreen;
  std::optional<double> nearest_m;  // empty with no qualifying person
};

/// Closest qualifying person decides; nobody in view means green.
FrameResult evaluate_frame(std::span<const Detection> detections, const Calibration& cal,
                           double min_confidence = kDefaultMinConfidence);

/// The screen state carries no memory between frames; `prev` is accepted so
/// callers can thread per-session state uniformly.
ScreenState step_distancer(std::span<const Detection> detections, const Calibration& cal,
                           ScreenState prev, double min_confidence = kDefaultMinConfidence);

/// Synthetic stand-in for the person detector: projects every agent in the
/// wearer's forward camera field of view to an upright box.
struct CameraModel {
  Calibration calibration;
  double horizontal_fov_deg = 60.0;
  double image_width = 1280.0;
  double image_height = 720.0;
};

std::vector<Detection> project_detections(const Scene& scene, const CameraModel& camera);

}  // namespace vironment::distancer

#include "vironment/distancer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vironment::distancer {

void Detection::validate() const {
  if (!(bbox_bottom > bbox_top)) throw std::invalid_argument("bbox_bottom must exceed bbox_top");
  if (!(bbox_right > bbox_left)) throw std::invalid_argument("bbox_right must exceed bbox_left");
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw std::invalid_argument("confidence must be in [0, 1]");
  }
}

void Calibration::validate() const {
  if (!(focal_length > 0.0) || !std::isfinite(focal_length)) {
    throw std::invalid_argument("focal_length must be positive");
  }
  if (!(person_height > 0.0) || !std::isfinite(person_height)) {
    throw std::invalid_argument("person_height must be positive");
  }
}

std::string_view to_string(ScreenState s) {
  switch (s) {
    case ScreenState::kGreen: return "green";
    case ScreenState::kYellow: return "yellow";
    case ScreenState::kRed: return "red";
  }
  return "green";
}

double estimate_distance(const Detection& det, const Calibration& cal) {
  const double h = det.height_px();
  if (!(h > 0.0)) throw std::invalid_argument("bounding box height must be positive");
  return cal.focal_length * cal.person_height / h;
}

ScreenState screen_state(double distance_m) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("distance must be positive");
  if (distance_m < kRedBelow) return ScreenState::kRed;
  if (distance_m < kYellowBelow) return ScreenState::kYellow;
  return ScreenState::kGreen;
}

FrameResult evaluate_frame(std::span<const Detection> detections, const Calibration& cal,
                           double min_confidence) {
  FrameResult r;
  for (const auto& det : detections) {
    if (det.class_label != kPersonLabel || det.confidence < min_confidence) continue;
    if (!(det.height_px() > 0.0)) continue;
    const double d = estimate_distance(det, cal);
    if (!r.nearest_m || d < *r.nearest_m) r.nearest_m = d;
  }
  if (r.nearest_m) r.state = screen_state(*r.nearest_m);
  return r;
}

ScreenState step_distancer(std::span<const Detection> detections, const Calibration& cal,
                           ScreenState /*prev*/, double min_confidence) {
  return evaluate_frame(detections, cal, min_confidence).state;
}

std::vector<Detection> project_detections(const Scene& scene, const CameraModel& camera) {
  std::vector<Detection> out;
  const double f = camera.calibration.focal_length;
  const double half_fov = camera.horizontal_fov_deg / 2.0;
  for (const auto& agent : scene.agents) {
    const PolarTarget t = to_egocentric(scene.wearer, {agent.x, agent.y});
    const double offset = circular_difference(t.bearing, 0.0);
    if (std::abs(offset) >= half_fov || t.range <= 0.0) continue;
    // Depth along the optical axis; the box scales with it.
    const double depth = t.range * std::cos(offset * std::numbers::pi / 180.0);
    const double h = f * camera.calibration.person_height / depth;
    const double w = f * 2.0 * agent.radius / depth;
    const double u = camera.image_width / 2.0 + f * std::tan(offset * std::numbers::pi / 180.0);
    const double v = camera.image_height / 2.0;
    Detection d;
    d.bbox_top = v - h / 2.0;
    d.bbox_bottom = v + h / 2.0;
    d.bbox_left = u - w / 2.0;
    d.bbox_right = u + w / 2.0;
    d.confidence = 1.0;
    d.class_label = std::string(kPersonLabel);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace vironment::distancer

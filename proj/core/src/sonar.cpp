#include "vironment/sonar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace vironment {

namespace {

constexpr double kRadPerDeg = std::numbers::pi / 180.0;

[[noreturn]] void invalid(const std::string& msg) { throw std::invalid_argument(msg); }

// Distance from the wearer to the near side of one agent, restricted to
// rays inside the cone. The near-intersection distance along a ray grows
// with its angular offset from the agent center, so the best ray is the
// cone ray closest to the center direction.
std::optional<double> surface_in_cone(const PolarTarget& center, double radius,
                                      double sensor_bearing_deg, double half_angle_deg) {
  const double d = center.range;
  if (d <= radius) return 0.0;  // wearer inside the cylinder: contact

  const double offset = std::abs(circular_difference(center.bearing, sensor_bearing_deg));
  const double psi_deg = std::max(0.0, offset - half_angle_deg);
  if (psi_deg >= 90.0) return std::nullopt;

  const double psi = psi_deg * kRadPerDeg;
  const double s = d * std::sin(psi);
  const double disc = radius * radius - s * s;
  if (disc < 0.0) return std::nullopt;
  return d * std::cos(psi) - std::sqrt(disc);
}

}  // namespace

void SonarSpec::validate() const {
  if (!(min_range > 0.0 && min_range < max_range) || !std::isfinite(max_range)) {
    invalid("sonar range must satisfy 0 < min_range < max_range");
  }
  if (!(beam_half_angle > 0.0 && beam_half_angle <= 45.0)) {
    invalid("beam_half_angle must be in (0, 45] degrees");
  }
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound)) {
    invalid("speed_of_sound must be positive");
  }
}

void Agent::validate() const {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(vx) || !std::isfinite(vy)) {
    invalid("agent '" + id + "' has a non-finite position or velocity");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    invalid("agent '" + id + "' radius must be positive");
  }
}

void Scene::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& a : agents) {
    a.validate();
    if (!seen.insert(a.id).second) invalid("duplicate agent id '" + a.id + "'");
  }
}

const Agent* Scene::find(const std::string& id) const {
  auto it = std::find_if(agents.begin(), agents.end(), [&](const Agent& a) { return a.id == id; });
  return it == agents.end() ? nullptr : &*it;
}

Agent* Scene::find(const std::string& id) {
  return const_cast<Agent*>(std::as_const(*this).find(id));
}

void NoiseModel::validate() const {
  if (!(stddev >= 0.0) || !std::isfinite(stddev)) invalid("noise stddev must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) invalid("dropout_prob must be in [0, 1]");
}

double echo_time(double distance_m, const SonarSpec& spec) {
  if (!(distance_m >= 0.0)) invalid("echo distance must be non-negative");
  return 2.0 * distance_m / spec.speed_of_sound;
}

double distance_from_echo(double seconds, const SonarSpec& spec) {
  if (!(seconds >= 0.0)) invalid("echo time must be non-negative");
  return seconds * spec.speed_of_sound / 2.0;
}

std::optional<double> first_echo(const Scene& scene, double sensor_bearing_deg,
                                 const SonarSpec& spec) {
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& agent : scene.agents) {
    const PolarTarget center = to_egocentric(scene.wearer, {agent.x, agent.y});
    if (auto hit = surface_in_cone(center, agent.radius, sensor_bearing_deg,
                                   spec.beam_half_angle)) {
      nearest = std::min(nearest, *hit);
    }
  }
  if (nearest > spec.max_range || nearest < spec.min_range) return std::nullopt;
  return std::clamp(nearest, spec.min_range, spec.max_range);
}

std::optional<double> apply_noise(std::optional<double> distance_m, const NoiseModel& noise,
                                  const SonarSpec& spec, NoiseStream& stream) {
  if (!distance_m) return std::nullopt;
  if (noise.dropout_prob > 0.0) {
    std::bernoulli_distribution drop(noise.dropout_prob);
    if (drop(stream)) return std::nullopt;
  }
  double d = *distance_m;
  if (noise.stddev > 0.0) {
    std::normal_distribution<double> gauss(0.0, noise.stddev);
    d += gauss(stream);
  }
  return std::clamp(d, spec.min_range, spec.max_range);
}

Scene step_scene(const Scene& scene, double dt_s) {
  if (!(dt_s > 0.0)) invalid("step dt must be positive");
  Scene next = scene;
  for (auto& a : next.agents) {
    a.x += a.vx * dt_s;
    a.y += a.vy * dt_s;
  }
  return next;
}

}  // namespace vironment

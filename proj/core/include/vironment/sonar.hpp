#pragma once

// HC-SR04-class rangefinder model and the 2-D scene it looks at.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vironment/geometry.hpp"

namespace vironment {

struct SonarSpec {
  double min_range = 0.02;        // m
  double max_range = 4.0;         // m
  double beam_half_angle = 15.0;  // deg
  double speed_of_sound = 343.0;  // m/s

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct Agent {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double radius = 0.25;

  void validate() const;
  friend bool operator==(const Agent&, const Agent&) = default;
};

struct Scene {
  WearerPose wearer;
  std::vector<Agent> agents;
  std::uint64_t rng_seed = 0;

  /// Checks every agent and id uniqueness.
  void validate() const;

  const Agent* find(const std::string& id) const;
  Agent* find(const std::string& id);
};

struct NoiseModel {
  double stddev = 0.0;        // m
  double dropout_prob = 0.0;  // [0, 1]

  void validate() const;
};

/// Deterministic random stream shared by one session.
using NoiseStream = std::mt19937_64;

/// Round-trip time of flight for a reflector at `distance_m`.
double echo_time(double distance_m, const SonarSpec& spec);

/// One-way distance for a measured round-trip time.
double distance_from_echo(double seconds, const SonarSpec& spec);

/// Nearest agent surface inside the beam cone about `sensor_bearing_deg`
/// (clockwise from the wearer's forward direction). Empty when nothing is
/// within max_range or when the nearest surface sits in the blanking zone
/// below min_range.
std::optional<double> first_echo(const Scene& scene, double sensor_bearing_deg,
                                 const SonarSpec& spec);

/// Dropout, then additive Gaussian noise, then clamping to the valid range.
std::optional<double> apply_noise(std::optional<double> distance_m, const NoiseModel& noise,
                                  const SonarSpec& spec, NoiseStream& stream);

/// Advances every agent by velocity * dt. Throws for dt <= 0.
Scene step_scene(const Scene& scene, double dt_s);

}  // namespace vironment

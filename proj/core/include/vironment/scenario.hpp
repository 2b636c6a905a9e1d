#pragma once

// Scenario documents (JSON):
//
//   {
//     "wearer": {"x": 0, "y": 0, "heading": 90},
//     "agents": [{"id": "a", "x": 0, "y": 4.25, "vx": 0, "vy": -0.5, "radius": 0.25}],
//     "script": [{"t_ms": 3000, "command": "remove-agent", "args": {"id": "a"}}],
//     "config": {
//       "seed": 7, "duration_s": 9.0, "cycles": 30,
//       "sonar":    {"min_range": 0.02, "max_range": 4.0, "beam_half_angle": 15, "speed_of_sound": 343},
//       "noise":    {"stddev": 0.0, "dropout_prob": 0.0},
//       "alert":    {"threshold": 2.0, "trigger_count": 2, "release_count": 3, "release_threshold": 2.2},
//       "schedule": {"margin_s": 0.001676, "sensor_order": [0, 1, ..., 11]}
//     }
//   }
//
// Everything except "wearer" is optional. Unknown fields are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vironment/session.hpp"

namespace vironment {

struct Scenario {
  Scene scene;
  SessionConfig config;
  std::vector<TimedCommand> script;
  std::optional<std::uint64_t> cycles;  // explicit cycle bound, wins over duration
};

class ScenarioError : public std::runtime_error {
 public:
  enum class Kind { kIo, kParse, kSemantic };

  ScenarioError(Kind kind, std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message),
        kind_(kind),
        where_(std::move(where)) {}

  Kind kind() const { return kind_; }
  /// "line L, column C" for parse errors, a JSON pointer for semantic ones.
  const std::string& where() const { return where_; }

 private:
  Kind kind_;
  std::string where_;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Writes every field, defaults included, so the result reloads to an
/// identical Scenario.
std::string save_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace vironment

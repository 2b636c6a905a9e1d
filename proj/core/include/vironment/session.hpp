#pragma once

// Deterministic session loop: commands -> scene step -> scan -> PPI -> alert.

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vironment/alert.hpp"
#include "vironment/mux.hpp"
#include "vironment/ppi.hpp"
#include "vironment/sonar.hpp"

namespace vironment {

struct MoveAgent {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> vx;  // unchanged when absent
  std::optional<double> vy;
};

struct AddAgent {
  Agent agent;
};

struct RemoveAgent {
  std::string id;
};

struct MoveWearer {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> heading;  // unchanged when absent
};

using Command = std::variant<MoveAgent, AddAgent, RemoveAgent, MoveWearer>;

std::string_view command_name(const Command& cmd);

struct TimedCommand {
  std::uint64_t t_ms = 0;
  Command command;
};

/// Applies one command to a scene. Throws std::invalid_argument for an
/// unknown or duplicate agent id or invalid values; the scene is left
/// untouched in that case.
void apply_command(Scene& scene, const Command& cmd);

struct SessionConfig {
  SonarSpec spec;
  NoiseModel noise;
  AlertConfig alert;
  ScanSchedule schedule = ScanSchedule::for_spec(SonarSpec{});
  std::optional<double> duration_s;  // empty = unbounded
  std::uint64_t seed = 0;

  void validate() const;
  double cycle_duration() const { return schedule.cycle_duration(); }

  /// floor(duration / cycle_duration) for bounded sessions.
  std::optional<std::uint64_t> cycle_count() const;
};

struct TelemetryRecord {
  std::uint64_t cycle = 0;
  std::uint32_t timestamp_ms = 0;
  ScanFrame frame;
  PpiFrame ppi;
  AlertOutputs alert;
  WearerPose wearer;
  std::vector<Agent> agents;

  friend bool operator==(const TelemetryRecord&, const TelemetryRecord&) = default;
};

struct CommandError {
  std::uint64_t cycle = 0;
  std::optional<std::uint64_t> t_ms;  // scripted commands only
  std::string command;
  std::string message;

  friend bool operator==(const CommandError&, const CommandError&) = default;
};

struct CycleOutput {
  TelemetryRecord record;
  std::vector<CommandError> errors;
};

/// One device session. Commands are only applied at cycle boundaries:
/// scripted commands whose t_ms has been reached, in timestamp order, then
/// live commands in arrival order.
class Session {
 public:
  Session(Scene scene, SessionConfig cfg, std::vector<TimedCommand> script = {});

  CycleOutput step();

  /// Queues a command for the next cycle boundary.
  void enqueue(Command cmd);

  /// Restores the initial scene, script, noise stream, and counters.
  void reset();

  const Scene& scene() const { return scene_; }
  const SessionConfig& config() const { return cfg_; }
  std::uint64_t cycle() const { return cycle_; }
  const AlertState& alert_state() const { return alert_; }

 private:
  void apply_due_commands(std::vector<CommandError>& errors);

  Scene initial_scene_;
  SessionConfig cfg_;
  std::vector<TimedCommand> script_;  // stable-sorted by t_ms

  Scene scene_;
  Scanner scanner_;
  NoiseStream stream_;
  AlertState alert_;
  std::uint64_t cycle_ = 0;
  std::size_t next_script_ = 0;
  std::deque<Command> live_;
};

struct SessionOutput {
  std::vector<TelemetryRecord> records;
  std::vector<CommandError> errors;
};

/// Runs a bounded session to completion. `cycles` overrides the configured
/// duration; throws std::invalid_argument when neither bounds the run.
SessionOutput run_session(const Scene& scene, const SessionConfig& cfg,
                          const std::vector<TimedCommand>& commands,
                          std::optional<std::uint64_t> cycles = std::nullopt);

}  // namespace vironment

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "vironment/codec.hpp"
#include "vironment/scenario.hpp"

using namespace vironment;

namespace {

ScenarioError parse_error(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e;
  }
  FAIL("expected a ScenarioError");
  return ScenarioError(ScenarioError::Kind::kIo, "", "");
}

}  // namespace

TEST_CASE("minimal scenario gets defaults") {
  const auto sc = parse_scenario(R"({"wearer": {"x": 1, "y": 2}})");
  CHECK(sc.scene.agents.empty());
  CHECK(sc.scene.wearer.x == 1);
  CHECK(sc.scene.wearer.heading == 0);
  CHECK(sc.config.spec.max_range == 4.0);
  CHECK(sc.config.alert.trigger_count == 2);
  CHECK(sc.config.schedule.sensor_order == kClockOrder);
  CHECK(std::abs(sc.config.cycle_duration() - 0.3) < 1e-5);
  CHECK_FALSE(sc.config.duration_s);
  CHECK(sc.script.empty());
}

TEST_CASE("duplicate agent id names the id") {
  const auto e = parse_error(R"({"wearer": {"x": 0, "y": 0},
    "agents": [{"id": "bob", "x": 1, "y": 1}, {"id": "bob", "x": 2, "y": 2}]})");
  CHECK(e.kind() == ScenarioError::Kind::kSemantic);
  CHECK(e.where() == "/agents/1/id");
  CHECK(std::string(e.what()).find("bob") != std::string::npos);
}

TEST_CASE("unknown fields are rejected with their path") {
  auto e = parse_error(R"({"wearer": {"x": 0, "y": 0}, "agents": [{"id": "a", "x": 1, "y": 1, "vz": 3}]})");
  CHECK(e.where() == "/agents/0/vz");
  e = parse_error(R"({"wearer": {"x": 0, "y": 0}, "config": {"sonar": {"range": 3}}})");
  CHECK(e.where() == "/config/sonar/range");
  e = parse_error(R"({"wearer": {"x": 0, "y": 0}, "extra": true})");
  CHECK(e.where() == "/extra");
  e = parse_error(R"({"wearer": {"x": 0, "y": 0}, "script": [{"t_ms": 5, "command": "fly"}]})");
  CHECK(e.where() == "/script/0/command");
}

TEST_CASE("semantic range errors name the field") {
  auto e = parse_error(R"({"wearer": {"x": 0, "y": 0}, "config": {"sonar": {"min_range": 5}}})");
  CHECK(e.where() == "/config/sonar");
  e = parse_error(R"({"wearer": {"x": 0, "y": 0}, "config": {"noise": {"dropout_prob": 2}}})");
  CHECK(e.where() == "/config/noise");
  e = parse_error(R"({"wearer": {"x": 0, "y": 0}, "config": {"schedule": {"sensor_order": [0,0,1,2,3,4,5,6,7,8,9,10]}}})");
  CHECK(e.where() == "/config/schedule");
  e = parse_error(R"({"wearer": {"x": 0, "y": 0}, "agents": [{"id": "a", "x": 1, "y": 1, "radius": 0}]})");
  CHECK(e.where() == "/agents/0/radius");
  e = parse_error(R"({"wearer": {"x": "zero", "y": 0}})");
  CHECK(e.where() == "/wearer/x");
  e = parse_error(R"({"agents": []})");
  CHECK(e.where() == "/wearer");
}

TEST_CASE("parse errors carry line and column") {
  const auto e = parse_error("{\n  \"wearer\": {\"x\": 0,\n  \"y\": }\n}");
  CHECK(e.kind() == ScenarioError::Kind::kParse);
  CHECK(e.where().rfind("line 3", 0) == 0);
}

TEST_CASE("missing file is an io error") {
  try {
    load_scenario("/nonexistent/scenario.json");
    FAIL("expected throw");
  } catch (const ScenarioError& e) {
    CHECK(e.kind() == ScenarioError::Kind::kIo);
  }
}

TEST_CASE("full scenario round-trips through save") {
  const char* text = R"({
    "wearer": {"x": 0.5, "y": -1, "heading": 123.5},
    "agents": [{"id": "a", "x": 1, "y": 2, "vx": 0.1, "vy": -0.2, "radius": 0.3},
               {"id": "b", "x": -3, "y": 0.25}],
    "script": [{"t_ms": 900, "command": "move-agent", "args": {"id": "a", "x": 0, "y": 1, "vx": 0}},
               {"t_ms": 1200, "command": "remove-agent", "args": {"id": "b"}},
               {"t_ms": 1500, "command": "add-agent", "args": {"id": "c", "x": 2, "y": 2}},
               {"t_ms": 1800, "command": "move-wearer", "args": {"x": 1, "y": 1}}],
    "config": {"seed": 17, "duration_s": 12.5, "cycles": 33,
               "sonar": {"min_range": 0.03, "max_range": 3.5, "beam_half_angle": 12, "speed_of_sound": 340},
               "noise": {"stddev": 0.015, "dropout_prob": 0.1},
               "alert": {"threshold": 1.8, "trigger_count": 3, "release_count": 4, "release_threshold": 2.0},
               "schedule": {"margin_s": 0.004, "sensor_order": [0, 6, 1, 7, 2, 8, 3, 9, 4, 10, 5, 11]}}
  })";
  const auto a = parse_scenario(text);
  const auto saved = save_scenario(a);
  const auto b = parse_scenario(saved);

  CHECK(b.scene.agents == a.scene.agents);
  CHECK(b.scene.wearer.heading == a.scene.wearer.heading);
  CHECK(b.scene.rng_seed == 17);
  CHECK(b.cycles == a.cycles);
  CHECK(b.config.duration_s == a.config.duration_s);
  CHECK(b.config.seed == a.config.seed);
  CHECK(b.config.spec.speed_of_sound == 340);
  CHECK(b.config.noise.dropout_prob == 0.1);
  CHECK(b.config.alert.release_count == 4);
  CHECK(b.config.schedule.slot_duration == a.config.schedule.slot_duration);
  CHECK(b.config.schedule.sensor_order == a.config.schedule.sensor_order);
  REQUIRE(b.script.size() == a.script.size());
  for (std::size_t i = 0; i < a.script.size(); ++i) {
    CHECK(b.script[i].t_ms == a.script[i].t_ms);
    CHECK(codec::to_json(b.script[i].command) == codec::to_json(a.script[i].command));
  }
  // Saving is a fixed point after one normalization pass.
  CHECK(save_scenario(b) == saved);
}

TEST_CASE("bundled scenarios load") {
  for (const auto& entry : std::filesystem::directory_iterator(VIRONMENT_SCENARIO_DIR)) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenario(entry.path()));
  }
}

TEST_CASE("command codec round trip and strictness") {
  const std::vector<Command> cmds = {MoveAgent{"a", 1, 2, 0.5, std::nullopt},
                                     AddAgent{{"z", 1, 1, 0, 0, 0.4}}, RemoveAgent{"q"},
                                     MoveWearer{3, 4, 10.0}};
  for (const auto& c : cmds) {
    const auto j = codec::to_json(c);
    CHECK(codec::to_json(codec::command_from_json(j)) == j);
  }
  CHECK_THROWS_AS(codec::command_from_json(nlohmann::json::parse(
                      R"({"command": "move-agent", "args": {"id": "a", "x": 1}})")),
                  SchemaError);
  CHECK_THROWS_AS(codec::command_from_json(nlohmann::json::parse(
                      R"({"command": "remove-agent", "args": {"id": "a"}, "extra": 1})")),
                  SchemaError);
}

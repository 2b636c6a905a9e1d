#include "vironment/scenario.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "strict_fields.hpp"
#include "vironment/codec.hpp"

namespace vironment {

namespace {

using nlohmann::json;
using detail::StrictFields;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

WearerPose wearer_from_json(const json& j, const std::string& path) {
  StrictFields f(j, path);
  const double x = f.required<double>("x");
  const double y = f.required<double>("y");
  const double heading = f.optional<double>("heading").value_or(0.0);
  f.finish();
  return WearerPose(x, y, heading);
}

template <class Fn>
void semantic(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
}

void config_from_json(const json& j, const std::string& path, Scenario& sc) {
  StrictFields f(j, path);
  SessionConfig& cfg = sc.config;
  if (auto seed = f.optional<std::uint64_t>("seed")) cfg.seed = *seed;
  cfg.duration_s = f.optional<double>("duration_s");
  sc.cycles = f.optional<std::uint64_t>("cycles");

  if (const json* s = f.find("sonar")) {
    StrictFields g(*s, f.child("sonar"));
    cfg.spec.min_range = g.optional<double>("min_range").value_or(cfg.spec.min_range);
    cfg.spec.max_range = g.optional<double>("max_range").value_or(cfg.spec.max_range);
    cfg.spec.beam_half_angle =
        g.optional<double>("beam_half_angle").value_or(cfg.spec.beam_half_angle);
    cfg.spec.speed_of_sound = g.optional<double>("speed_of_sound").value_or(cfg.spec.speed_of_sound);
    g.finish();
    semantic(f.child("sonar"), [&] { cfg.spec.validate(); });
  }
  if (const json* n = f.find("noise")) {
    StrictFields g(*n, f.child("noise"));
    cfg.noise.stddev = g.optional<double>("stddev").value_or(0.0);
    cfg.noise.dropout_prob = g.optional<double>("dropout_prob").value_or(0.0);
    g.finish();
    semantic(f.child("noise"), [&] { cfg.noise.validate(); });
  }
  if (const json* a = f.find("alert")) {
    StrictFields g(*a, f.child("alert"));
    cfg.alert.threshold = g.optional<double>("threshold").value_or(cfg.alert.threshold);
    cfg.alert.trigger_count = g.optional<int>("trigger_count").value_or(cfg.alert.trigger_count);
    cfg.alert.release_count = g.optional<int>("release_count").value_or(cfg.alert.release_count);
    cfg.alert.release_threshold =
        g.optional<double>("release_threshold").value_or(cfg.alert.release_threshold);
    g.finish();
    semantic(f.child("alert"), [&] { cfg.alert.validate(); });
  }

  // The slot length depends on the sonar range, so the schedule is rebuilt
  // after the sonar block has been read.
  std::optional<double> margin, slot;
  SensorOrder order = kClockOrder;
  if (const json* s = f.find("schedule")) {
    const std::string sp = f.child("schedule");
    StrictFields g(*s, sp);
    margin = g.optional<double>("margin_s");
    slot = g.optional<double>("slot_duration_s");
    if (margin && slot) throw SchemaError(sp, "give margin_s or slot_duration_s, not both");
    if (const json* o = g.find("sensor_order")) {
      if (!o->is_array() || o->size() != kSensorCount) {
        throw SchemaError(sp + "/sensor_order", "expected 12 sensor indices");
      }
      for (int i = 0; i < kSensorCount; ++i) {
        order[i] = StrictFields::convert<int>((*o)[i], sp + "/sensor_order/" + std::to_string(i));
      }
    }
    g.finish();
  }
  semantic(f.child("schedule"), [&] {
    if (slot) {
      cfg.schedule = ScanSchedule{*slot, order, 0};
    } else {
      cfg.schedule = ScanSchedule::for_spec(cfg.spec, margin.value_or(kDefaultSlotMargin), order);
    }
    cfg.schedule.validate(cfg.spec);
  });
  f.finish();
  semantic(path, [&] { cfg.validate(); });
}

Scenario scenario_from_json(const json& doc) {
  StrictFields f(doc, "");
  Scenario sc;

  const json* wearer = f.find("wearer");
  if (!wearer) throw SchemaError("/wearer", "missing required field");
  sc.scene.wearer = wearer_from_json(*wearer, "/wearer");

  if (const json* agents = f.find("agents")) {
    if (!agents->is_array()) throw SchemaError("/agents", "expected an array");
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < agents->size(); ++i) {
      const std::string path = "/agents/" + std::to_string(i);
      Agent a = codec::agent_from_json((*agents)[i], path);
      if (!ids.insert(a.id).second) {
        throw SchemaError(path + "/id", "duplicate agent id '" + a.id + "'");
      }
      semantic(path, [&] { a.validate(); });
      sc.scene.agents.push_back(std::move(a));
    }
  }

  if (const json* script = f.find("script")) {
    if (!script->is_array()) throw SchemaError("/script", "expected an array");
    for (std::size_t i = 0; i < script->size(); ++i) {
      const std::string path = "/script/" + std::to_string(i);
      const json& entry = (*script)[i];
      if (!entry.is_object()) throw SchemaError(path, "expected an object");
      json body = entry;
      if (!body.contains("t_ms")) throw SchemaError(path + "/t_ms", "missing required field");
      TimedCommand tc;
      tc.t_ms = StrictFields::convert<std::uint64_t>(body["t_ms"], path + "/t_ms");
      body.erase("t_ms");
      tc.command = codec::command_from_json(body, path);
      sc.script.push_back(std::move(tc));
    }
  }

  if (const json* cfg = f.find("config")) config_from_json(*cfg, "/config", sc);
  f.finish();

  sc.scene.rng_seed = sc.config.seed;
  return sc;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(ScenarioError::Kind::kParse, line_column(text, e.byte), e.what());
  }
  try {
    return scenario_from_json(doc);
  } catch (const SchemaError& e) {
    std::string msg = e.what();
    if (!e.path().empty()) msg = msg.substr(e.path().size() + 2);
    throw ScenarioError(ScenarioError::Kind::kSemantic, e.path(), msg);
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(ScenarioError::Kind::kIo, path.string(), "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string save_scenario(const Scenario& sc) {
  json doc;
  doc["wearer"] = codec::to_json(sc.scene.wearer);
  json agents = json::array();
  for (const auto& a : sc.scene.agents) agents.push_back(codec::to_json(a));
  doc["agents"] = std::move(agents);

  json script = json::array();
  for (const auto& tc : sc.script) {
    json e = codec::to_json(tc.command);
    e["t_ms"] = tc.t_ms;
    script.push_back(std::move(e));
  }
  doc["script"] = std::move(script);

  const SessionConfig& c = sc.config;
  json cfg = {
      {"seed", c.seed},
      {"sonar",
       {{"min_range", c.spec.min_range},
        {"max_range", c.spec.max_range},
        {"beam_half_angle", c.spec.beam_half_angle},
        {"speed_of_sound", c.spec.speed_of_sound}}},
      {"noise", {{"stddev", c.noise.stddev}, {"dropout_prob", c.noise.dropout_prob}}},
      {"alert",
       {{"threshold", c.alert.threshold},
        {"trigger_count", c.alert.trigger_count},
        {"release_count", c.alert.release_count},
        {"release_threshold", c.alert.release_threshold}}},
      {"schedule",
       {{"slot_duration_s", c.schedule.slot_duration},
        {"sensor_order", c.schedule.sensor_order}}},
  };
  if (c.duration_s) cfg["duration_s"] = *c.duration_s;
  if (sc.cycles) cfg["cycles"] = *sc.cycles;
  doc["config"] = std::move(cfg);
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError(ScenarioError::Kind::kIo, path.string(), "cannot write scenario");
  out << save_scenario(scenario);
}

}  // namespace vironment

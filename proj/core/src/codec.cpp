#include "vironment/codec.hpp"

#include <set>

#include "strict_fields.hpp"

namespace vironment::codec {

json to_json(const ScanFrame& frame) {
  return {{"seq", frame.seq}, {"timestamp_ms", frame.timestamp_ms}, {"readings", frame.readings}};
}

json to_json(const PpiFrame& ppi) {
  json sectors = json::array();
  for (const auto& s : ppi.sectors) {
    sectors.push_back({{"clock", s.dodecant.clock_position()},
                       {"radius_fraction", s.radius_fraction},
                       {"green", s.green}});
  }
  return sectors;
}

json to_json(const Agent& a) {
  return {{"id", a.id}, {"x", a.x}, {"y", a.y}, {"vx", a.vx}, {"vy", a.vy}, {"radius", a.radius}};
}

json to_json(const WearerPose& p) { return {{"x", p.x}, {"y", p.y}, {"heading", p.heading}}; }

json to_json(const TelemetryRecord& rec) {
  json agents = json::array();
  for (const auto& a : rec.agents) agents.push_back(to_json(a));
  return {{"type", "telemetry"},
          {"cycle", rec.cycle},
          {"timestamp_ms", rec.timestamp_ms},
          {"seq", rec.frame.seq},
          {"readings", rec.frame.readings},
          {"ppi", to_json(rec.ppi)},
          {"alert", {{"led", rec.alert.led}, {"horn", rec.alert.horn}}},
          {"wearer", to_json(rec.wearer)},
          {"agents", std::move(agents)}};
}

json to_json(const CommandError& err) {
  json j = {{"type", "error"}, {"cycle", err.cycle}, {"command", err.command},
            {"message", err.message}};
  if (err.t_ms) j["t_ms"] = *err.t_ms;
  return j;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

json to_json(const Command& cmd) {
  json args = std::visit(
      overloaded{
          [](const MoveAgent& c) {
            json a = {{"id", c.id}, {"x", c.x}, {"y", c.y}};
            if (c.vx) a["vx"] = *c.vx;
            if (c.vy) a["vy"] = *c.vy;
            return a;
          },
          [](const AddAgent& c) { return to_json(c.agent); },
          [](const RemoveAgent& c) { return json{{"id", c.id}}; },
          [](const MoveWearer& c) {
            json a = {{"x", c.x}, {"y", c.y}};
            if (c.heading) a["heading"] = *c.heading;
            return a;
          },
      },
      cmd);
  return {{"command", command_name(cmd)}, {"args", std::move(args)}};
}

Agent agent_from_json(const json& j, const std::string& path) {
  detail::StrictFields f(j, path);
  Agent a;
  a.id = f.required<std::string>("id");
  a.x = f.required<double>("x");
  a.y = f.required<double>("y");
  a.vx = f.optional<double>("vx").value_or(0.0);
  a.vy = f.optional<double>("vy").value_or(0.0);
  a.radius = f.optional<double>("radius").value_or(0.25);
  f.finish();
  if (!(a.radius > 0.0)) throw SchemaError(path + "/radius", "must be positive");
  return a;
}

Command command_from_json(const json& j, const std::string& path) {
  detail::StrictFields top(j, path);
  const auto name = top.required<std::string>("command");
  const std::string args_path = path + "/args";
  const json empty = json::object();
  const json* args = top.find("args");
  if (!args) args = &empty;

  Command cmd;
  detail::StrictFields f(*args, args_path);
  if (name == "move-agent") {
    MoveAgent c;
    c.id = f.required<std::string>("id");
    c.x = f.required<double>("x");
    c.y = f.required<double>("y");
    c.vx = f.optional<double>("vx");
    c.vy = f.optional<double>("vy");
    cmd = c;
  } else if (name == "add-agent") {
    f.skip_all();
    cmd = AddAgent{agent_from_json(*args, args_path)};
  } else if (name == "remove-agent") {
    cmd = RemoveAgent{f.required<std::string>("id")};
  } else if (name == "move-wearer") {
    MoveWearer c;
    c.x = f.required<double>("x");
    c.y = f.required<double>("y");
    c.heading = f.optional<double>("heading");
    cmd = c;
  } else {
    throw SchemaError(path + "/command", "unknown command '" + name + "'");
  }
  f.finish();
  top.finish();
  return cmd;
}

FrameWithAlert frame_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "frame must be an object");
  FrameWithAlert out;
  try {
    out.frame.seq = j.at("seq").get<std::uint16_t>();
    out.frame.timestamp_ms = j.at("timestamp_ms").get<std::uint32_t>();
    const auto& r = j.at("readings");
    if (!r.is_array() || r.size() != kSensorCount) {
      throw SchemaError("/readings", "expected 12 readings");
    }
    for (int i = 0; i < kSensorCount; ++i) out.frame.readings[i] = r[i].get<std::uint16_t>();
  } catch (const json::exception& e) {
    throw SchemaError("", e.what());
  }
  if (auto it = j.find("alert"); it != j.end()) {
    if (it->is_boolean()) {
      out.alert = it->get<bool>();
    } else if (it->is_object() && it->contains("led")) {
      out.alert = it->at("led").get<bool>();
    } else {
      throw SchemaError("/alert", "expected a boolean or {\"led\": bool}");
    }
  }
  try {
    out.frame.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/readings", e.what());
  }
  return out;
}

distancer::Detection detection_from_json(const json& j, const std::string& path) {
  detail::StrictFields f(j, path);
  distancer::Detection d;
  d.bbox_top = f.required<double>("bbox_top");
  d.bbox_bottom = f.required<double>("bbox_bottom");
  d.bbox_left = f.required<double>("bbox_left");
  d.bbox_right = f.required<double>("bbox_right");
  d.confidence = f.required<double>("confidence");
  d.class_label = f.required<std::string>("class_label");
  f.finish();
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
  return d;
}

json to_json(const distancer::Detection& d) {
  return {{"bbox_top", d.bbox_top},     {"bbox_bottom", d.bbox_bottom},
          {"bbox_left", d.bbox_left},   {"bbox_right", d.bbox_right},
          {"confidence", d.confidence}, {"class_label", d.class_label}};
}

}  // namespace vironment::codec

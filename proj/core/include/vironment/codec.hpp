#pragma once

// Structured-text forms of telemetry, commands and errors. One JSON object
// per line in logs; the same objects travel over the live channel.

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "vironment/distancer.hpp"
#include "vironment/session.hpp"

namespace vironment {

/// Malformed structured input. `path` is a JSON pointer to the offending
/// field ("" for the document root).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace codec {

using nlohmann::json;

json to_json(const ScanFrame& frame);
json to_json(const PpiFrame& ppi);
json to_json(const Agent& agent);
json to_json(const WearerPose& pose);

/// {"type":"telemetry", cycle, timestamp_ms, seq, readings, ppi, alert,
///  wearer, agents}
json to_json(const TelemetryRecord& rec);

/// {"type":"error", cycle, t_ms?, command, message}
json to_json(const CommandError& err);

/// {"command": "<name>", "args": {...}}
json to_json(const Command& cmd);

/// Strict parse: unknown fields and wrong types throw SchemaError.
Command command_from_json(const json& j, const std::string& path = "");
Agent agent_from_json(const json& j, const std::string& path);

/// Accepts any object carrying seq, timestamp_ms, readings and optionally
/// "alert" (bool or {"led":bool}); extra fields are ignored so telemetry
/// lines can be fed straight in.
struct FrameWithAlert {
  ScanFrame frame;
  bool alert = false;
};
FrameWithAlert frame_from_json(const json& j);

distancer::Detection detection_from_json(const json& j, const std::string& path);
json to_json(const distancer::Detection& det);

}  // namespace codec
}  // namespace vironment

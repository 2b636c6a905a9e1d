#pragma once

// Live session service. One HTTP port carries:
//   GET  /health  -> {"version", "seq", "cycle", "paused"}
//   GET  /ws      -> WebSocket: one telemetry message per cycle out,
//                    steering messages in
//   GET  /*       -> static UI assets from ServeOptions::static_dir
//
// Steering messages are the scenario command objects
// ({"command": "move-agent", "args": {...}}) plus the controls
// {"command": "pause" | "resume" | "reset"}. Everything is queued and applied
// at the next cycle boundary in arrival order. A malformed message gets an
// {"type": "error", ...} reply on the same connection only.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "vironment/scenario.hpp"

namespace vironment {

namespace detail {
struct ServiceState;
}

inline constexpr std::string_view kVersion = "0.3.0";

struct ServeOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks a free port
  std::filesystem::path static_dir;
  // Per-client backlog; a lagging client loses its oldest messages first.
  std::size_t client_queue_limit = 64;
};

class Service {
 public:
  Service(Scenario scenario, ServeOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the port and starts the network and session threads.
  void start();
  /// Idempotent.
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

  std::uint16_t port() const;

 private:
  std::unique_ptr<detail::ServiceState> impl_;
};

}  // namespace vironment

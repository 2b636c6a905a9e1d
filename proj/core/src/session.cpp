#include "vironment/session.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vironment {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Agent& require_agent(Scene& scene, const std::string& id) {
  Agent* a = scene.find(id);
  if (!a) throw std::invalid_argument("unknown agent id '" + id + "'");
  return *a;
}

}  // namespace

std::string_view command_name(const Command& cmd) {
  return std::visit(overloaded{
                        [](const MoveAgent&) { return std::string_view("move-agent"); },
                        [](const AddAgent&) { return std::string_view("add-agent"); },
                        [](const RemoveAgent&) { return std::string_view("remove-agent"); },
                        [](const MoveWearer&) { return std::string_view("move-wearer"); },
                    },
                    cmd);
}

void apply_command(Scene& scene, const Command& cmd) {
  Scene next = scene;
  std::visit(overloaded{
                 [&](const MoveAgent& c) {
                   Agent& a = require_agent(next, c.id);
                   a.x = c.x;
                   a.y = c.y;
                   if (c.vx) a.vx = *c.vx;
                   if (c.vy) a.vy = *c.vy;
                 },
                 [&](const AddAgent& c) {
                   if (next.find(c.agent.id)) {
                     throw std::invalid_argument("duplicate agent id '" + c.agent.id + "'");
                   }
                   next.agents.push_back(c.agent);
                 },
                 [&](const RemoveAgent& c) {
                   require_agent(next, c.id);
                   std::erase_if(next.agents, [&](const Agent& a) { return a.id == c.id; });
                 },
                 [&](const MoveWearer& c) {
                   next.wearer = WearerPose(c.x, c.y, c.heading.value_or(next.wearer.heading));
                 },
             },
             cmd);
  next.validate();
  scene = std::move(next);
}

void SessionConfig::validate() const {
  spec.validate();
  noise.validate();
  alert.validate();
  schedule.validate(spec);
  if (duration_s && !(*duration_s > 0.0)) {
    throw std::invalid_argument("session duration must be positive");
  }
}

std::optional<std::uint64_t> SessionConfig::cycle_count() const {
  if (!duration_s) return std::nullopt;
  // Relative slack so that e.g. 3.0 s / 0.3 s counts 10 cycles, not 9.
  const double n = *duration_s / cycle_duration();
  return static_cast<std::uint64_t>(std::floor(n * (1.0 + 1e-12)));
}

Session::Session(Scene scene, SessionConfig cfg, std::vector<TimedCommand> script)
    : initial_scene_(std::move(scene)),
      cfg_(cfg),
      script_(std::move(script)),
      scene_(initial_scene_),
      scanner_(cfg_.schedule, cfg_.spec, cfg_.noise),
      stream_(cfg_.seed) {
  cfg_.validate();
  initial_scene_.validate();
  std::stable_sort(script_.begin(), script_.end(),
                   [](const TimedCommand& a, const TimedCommand& b) { return a.t_ms < b.t_ms; });
}

void Session::reset() {
  scene_ = initial_scene_;
  scanner_ = Scanner(cfg_.schedule, cfg_.spec, cfg_.noise);
  stream_.seed(cfg_.seed);
  alert_ = {};
  cycle_ = 0;
  next_script_ = 0;
  live_.clear();
}

void Session::enqueue(Command cmd) { live_.push_back(std::move(cmd)); }

void Session::apply_due_commands(std::vector<CommandError>& errors) {
  const double boundary_ms = static_cast<double>(cycle_) * cfg_.cycle_duration() * 1000.0;
  while (next_script_ < script_.size() &&
         static_cast<double>(script_[next_script_].t_ms) <= boundary_ms) {
    const auto& tc = script_[next_script_++];
    try {
      apply_command(scene_, tc.command);
    } catch (const std::invalid_argument& e) {
      errors.push_back({cycle_, tc.t_ms, std::string(command_name(tc.command)), e.what()});
    }
  }
  while (!live_.empty()) {
    Command cmd = std::move(live_.front());
    live_.pop_front();
    try {
      apply_command(scene_, cmd);
    } catch (const std::invalid_argument& e) {
      errors.push_back({cycle_, std::nullopt, std::string(command_name(cmd)), e.what()});
    }
  }
}

CycleOutput Session::step() {
  CycleOutput out;
  apply_due_commands(out.errors);

  const double dt = cfg_.cycle_duration();
  scene_ = step_scene(scene_, dt);

  auto& rec = out.record;
  rec.cycle = cycle_;
  rec.timestamp_ms =
      static_cast<std::uint32_t>(std::llround(static_cast<double>(cycle_ + 1) * dt * 1000.0));
  rec.frame = scanner_.scan(scene_, stream_, rec.timestamp_ms);
  rec.ppi = build_ppi(rec.frame, cfg_.spec);
  const AlertStep a = step_alert(alert_, rec.frame, cfg_.alert);
  alert_ = a.state;
  rec.alert = a.outputs;
  rec.wearer = scene_.wearer;
  rec.agents = scene_.agents;

  ++cycle_;
  return out;
}

SessionOutput run_session(const Scene& scene, const SessionConfig& cfg,
                          const std::vector<TimedCommand>& commands,
                          std::optional<std::uint64_t> cycles) {
  const auto n = cycles ? cycles : cfg.cycle_count();
  if (!n) throw std::invalid_argument("run_session needs a bounded duration or cycle count");
  Session session(scene, cfg, commands);
  SessionOutput out;
  out.records.reserve(*n);
  for (std::uint64_t i = 0; i < *n; ++i) {
    auto c = session.step();
    out.records.push_back(std::move(c.record));
    for (auto& e : c.errors) out.errors.push_back(std::move(e));
  }
  return out;
}

}  // namespace vironment

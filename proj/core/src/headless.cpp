#include "vironment/headless.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

#include "vironment/codec.hpp"

namespace vironment {

Scenario with_overrides(Scenario sc, const HeadlessOptions& options) {
  if (options.seed) {
    sc.config.seed = *options.seed;
    sc.scene.rng_seed = *options.seed;
  }
  if (options.cycles) sc.cycles = options.cycles;
  if (!sc.cycles && !sc.config.duration_s) sc.cycles = kDefaultHeadlessCycles;
  return sc;
}

HeadlessSummary run_headless(const Scenario& sc, std::ostream& telemetry) {
  const auto out = run_session(sc.scene, sc.config, sc.script, sc.cycles);
  HeadlessSummary summary;
  summary.cycles = out.records.size();
  summary.command_errors = out.errors.size();

  auto err = out.errors.begin();
  for (const auto& rec : out.records) {
    for (; err != out.errors.end() && err->cycle <= rec.cycle; ++err) {
      telemetry << codec::to_json(*err).dump() << '\n';
    }
    telemetry << codec::to_json(rec).dump() << '\n';
    if (rec.alert.led) ++summary.alert_on_cycles;
    for (auto r : rec.frame.readings) {
      if (auto m = to_meters(r)) {
        summary.min_distance_m = std::min(summary.min_distance_m.value_or(*m), *m);
      }
    }
  }
  return summary;
}

HeadlessSummary run_headless(const std::filesystem::path& scenario_path,
                             const std::filesystem::path& output_path,
                             const HeadlessOptions& options) {
  const Scenario sc = with_overrides(load_scenario(scenario_path), options);
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    throw ScenarioError(ScenarioError::Kind::kIo, output_path.string(),
                        "cannot open telemetry output");
  }
  auto summary = run_headless(sc, out);
  out.flush();
  if (!out) {
    throw ScenarioError(ScenarioError::Kind::kIo, output_path.string(), "telemetry write failed");
  }
  return summary;
}

void print_summary(const HeadlessSummary& s, std::ostream& out) {
  out << "cycles: " << s.cycles << '\n';
  out << "alert-on cycles: " << s.alert_on_cycles << '\n';
  out << "command errors: " << s.command_errors << '\n';
  out << "min distance observed: ";
  if (s.min_distance_m) {
    out << std::fixed << std::setprecision(3) << *s.min_distance_m << " m\n";
  } else {
    out << "none\n";
  }
}

}  // namespace vironment

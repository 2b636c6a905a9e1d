#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

#include "vironment/scenario.hpp"

namespace vironment {

struct HeadlessOptions {
  std::optional<std::uint64_t> seed;    // overrides the scenario seed
  std::optional<std::uint64_t> cycles;  // overrides the scenario bound
};

struct HeadlessSummary {
  std::uint64_t cycles = 0;
  std::uint64_t alert_on_cycles = 0;
  std::uint64_t command_errors = 0;
  std::optional<double> min_distance_m;  // over every non-sentinel reading
};

inline constexpr std::uint64_t kDefaultHeadlessCycles = 100;

/// Applies overrides; unbounded scenarios fall back to 100 cycles.
Scenario with_overrides(Scenario scenario, const HeadlessOptions& options);

/// Runs the scenario and writes the telemetry log: one JSON object per
/// line, a cycle's command errors immediately before its telemetry record.
HeadlessSummary run_headless(const Scenario& scenario, std::ostream& telemetry);

/// File-to-file form. Throws ScenarioError on load failures.
HeadlessSummary run_headless(const std::filesystem::path& scenario_path,
                             const std::filesystem::path& output_path,
                             const HeadlessOptions& options = {});

void print_summary(const HeadlessSummary& summary, std::ostream& out);

}  // namespace vironment

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cosched/heuristic.hpp"
#include "cosched/model.hpp"
#include "cosched/scenario.hpp"

namespace cosched {

struct WindowSpec {
  std::string label;  // "wk1", "wk2+wk3", "wk3+wk4+wk5", ...
  Minutes start = 0;
  Minutes end = 0;    // truncated at the set's window end
  std::size_t vessel_count = 0;
};

// Weekly rolling observation windows: spans of window_weeks weeks advancing
// by 7 days from the set's window start; the final window may truncate. A
// portcall joins every window containing its first activity start, so
// multi-week windows overlap in portcalls just as they overlap in weeks;
// the 1-week setting partitions the set. Throws std::invalid_argument for
// window_weeks outside {1,2,3}.
std::vector<std::pair<WindowSpec, ScheduleSet>> slice_windows(
    const ScheduleSet& set, int window_weeks);

// Throws std::invalid_argument on length mismatch, a negative weight, or
// zero total weight.
double weighted_average(std::span<const double> values,
                        std::span<const double> weights);

struct Savings {
  double hours = 0.0;
  double percent = 0.0;
};

// baseline - optimized, absolute and as a percentage of baseline. Throws
// std::invalid_argument for a non-positive baseline.
Savings savings(double baseline_hours, double optimized_hours);

struct WindowResult {
  WindowSpec spec;
  std::uint64_t flag_seed = 0;
  // Means over the window's own portcalls; the carried-in context is
  // excluded from both.
  double baseline_mean_hours = 0.0;
  double optimized_mean_hours = 0.0;
  OptimizationReport report;
};

struct RollingReport {
  int window_weeks = 1;
  std::uint64_t base_seed = 0;
  std::vector<WindowResult> windows;  // one per slice_windows window
  // Vessel-count-weighted averages over the non-empty windows.
  double benchmark_hours = 0.0;
  double optimized_mean_hours = 0.0;
  double saved_hours = 0.0;
  double saved_percent = 0.0;
  std::uint64_t residual_conflicts = 0;
  OpCounters counters;
};

// Rolling re-planning over the slice_windows windows. Each window optimizes
// its own portcalls together with the recorded history: portcalls that
// started before the window but still occupy a zone at window start are
// carried in frozen at their baseline times, so no window plans against a
// fictitiously empty port. Means and the weighted aggregate cover only
// each window's own portcalls; with multi-week windows a portcall is
// measured once per window containing it, matching the window overlap.
// Flags are drawn once per run (they are per-vessel, so every window sees
// the same draw). An empty set yields a zero report.
RollingReport run_rolling(const ScheduleSet& set, const PortTopology& topology,
                          const ScenarioParams& params, int window_weeks,
                          FlagPolicy policy = FlagPolicy::sample);

}  // namespace cosched

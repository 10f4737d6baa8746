#include "cosched/horizon.hpp"

#include <algorithm>
#include <stdexcept>

namespace cosched {

std::vector<std::pair<WindowSpec, ScheduleSet>> slice_windows(
    const ScheduleSet& set, int window_weeks) {
  if (window_weeks < 1 || window_weeks > 3) {
    throw std::invalid_argument("slice_windows: window_weeks outside {1,2,3}");
  }
  std::vector<std::pair<WindowSpec, ScheduleSet>> out;
  const Minutes span = set.window_end - set.window_start;
  if (span <= 0) return out;

  // Week slots over the span; the last slot may be short.
  const auto n_slots = static_cast<std::size_t>(
      (span + kMinutesPerWeek - 1) / kMinutesPerWeek);
  const std::size_t last_window =
      n_slots >= static_cast<std::size_t>(window_weeks)
          ? n_slots - static_cast<std::size_t>(window_weeks)
          : 0;

  for (std::size_t k = 0; k <= last_window; ++k) {
    WindowSpec spec;
    spec.start = set.window_start + static_cast<Minutes>(k) * kMinutesPerWeek;
    spec.end = std::min(
        set.window_end,
        spec.start + static_cast<Minutes>(window_weeks) * kMinutesPerWeek);
    const std::size_t first_wk = k + 1;
    const std::size_t last_wk =
        std::min(k + static_cast<std::size_t>(window_weeks), n_slots);
    for (std::size_t wk = first_wk; wk <= last_wk; ++wk) {
      if (wk != first_wk) spec.label += "+";
      spec.label += "wk" + std::to_string(wk);
    }

    ScheduleSet subset;
    subset.window_start = spec.start;
    subset.window_end = spec.end;
    for (const Portcall& pc : set.portcalls) {
      if (pc.activities.empty()) continue;
      const Minutes first_start = pc.activities.front().start;
      if (first_start < spec.start || first_start >= spec.end) continue;
      subset.portcalls.push_back(pc);
      for (const ActivityRecord& act : pc.activities) {
        subset.window_end = std::max(subset.window_end, act.end);
      }
    }
    spec.vessel_count = subset.portcalls.size();
    out.emplace_back(std::move(spec), std::move(subset));
  }
  return out;
}

double weighted_average(std::span<const double> values,
                        std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("weighted_average: length mismatch");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] < 0.0) {
      throw std::invalid_argument("weighted_average: negative weight");
    }
    num += values[i] * weights[i];
    den += weights[i];
  }
  if (den <= 0.0) {
    throw std::invalid_argument("weighted_average: zero total weight");
  }
  return num / den;
}

Savings savings(double baseline_hours, double optimized_hours) {
  if (baseline_hours <= 0.0) {
    throw std::invalid_argument("savings: non-positive baseline");
  }
  Savings out;
  out.hours = baseline_hours - optimized_hours;
  out.percent = 100.0 * out.hours / baseline_hours;
  return out;
}

RollingReport run_rolling(const ScheduleSet& set, const PortTopology& topology,
                          const ScenarioParams& params, int window_weeks,
                          FlagPolicy policy) {
  if (window_weeks < 1 || window_weeks > 3) {
    throw std::invalid_argument("run_rolling: window_weeks outside {1,2,3}");
  }
  check_params(params);
  RollingReport report;
  report.window_weeks = window_weeks;
  report.base_seed = params.seed;

  const Minutes span = set.window_end - set.window_start;
  if (span <= 0 || set.portcalls.empty()) return report;

  // One flag draw for the whole run; flags are per-vessel, so every window
  // containing a vessel sees the same draw.
  const ScheduleSet flagged =
      policy == FlagPolicy::sample ? sample_flags(set, params) : set;

  std::vector<double> baseline_means, optimized_means, weights;

  for (auto& [spec, members] : slice_windows(flagged, window_weeks)) {
    WindowResult wr;
    wr.spec = spec;
    wr.flag_seed = params.seed;
    if (members.portcalls.empty()) {
      report.windows.push_back(std::move(wr));
      continue;
    }

    // The window re-plans its own portcalls against the recorded history:
    // whatever started earlier and still occupies a zone at window start is
    // carried in as immovable context. Without it, every window would open
    // onto a fictitiously empty port and shorter windows would profit more
    // from the fiction.
    ScheduleSet solve;
    solve.window_start = set.window_start;
    solve.window_end = set.window_end;
    for (const Portcall& pc : flagged.portcalls) {
      if (pc.activities.empty()) continue;
      if (pc.activities.front().start >= spec.start) continue;
      Minutes last_end = pc.activities.front().end;
      for (const ActivityRecord& act : pc.activities) {
        last_end = std::max(last_end, act.end);
      }
      if (last_end <= spec.start) continue;
      Portcall fixed_pc = pc;
      for (ActivityRecord& act : fixed_pc.activities) {
        act.flag_temporal = Fixedness::fixed;
        act.flag_spatial = Fixedness::fixed;
      }
      solve.portcalls.push_back(std::move(fixed_pc));
    }
    const std::size_t n_ctx = solve.portcalls.size();
    for (const Portcall& pc : members.portcalls) solve.portcalls.push_back(pc);
    solve.window_end = std::max(solve.window_end, members.window_end);

    wr.report = optimize(solve, topology, params, FlagPolicy::keep_existing);

    double baseline_sum = 0.0, optimized_sum = 0.0;
    for (std::size_t i = 0; i < members.portcalls.size(); ++i) {
      baseline_sum += turnaround_hours(members.portcalls[i]);
      optimized_sum += turnaround_hours(wr.report.optimized.portcalls[n_ctx + i]);
    }
    const auto n_members = static_cast<double>(members.portcalls.size());
    wr.baseline_mean_hours = baseline_sum / n_members;
    wr.optimized_mean_hours = optimized_sum / n_members;
    baseline_means.push_back(wr.baseline_mean_hours);
    optimized_means.push_back(wr.optimized_mean_hours);
    weights.push_back(n_members);

    // Residuals are reported per window; only pairs touching a member
    // count, context-context pairs cannot overlap in the first place.
    for (const ResidualConflict& rc : wr.report.residuals) {
      if (rc.portcall_a >= n_ctx || rc.portcall_b >= n_ctx) {
        ++report.residual_conflicts;
      }
    }
    report.counters.step1_visits += wr.report.counters.step1_visits;
    report.counters.step2_comparisons += wr.report.counters.step2_comparisons;
    report.counters.passes += wr.report.counters.passes;
    report.windows.push_back(std::move(wr));
  }

  if (!baseline_means.empty()) {
    report.benchmark_hours = weighted_average(baseline_means, weights);
    report.optimized_mean_hours = weighted_average(optimized_means, weights);
    if (report.benchmark_hours > 0.0) {
      const Savings s =
          savings(report.benchmark_hours, report.optimized_mean_hours);
      report.saved_hours = s.hours;
      report.saved_percent = s.percent;
    }
  }
  return report;
}

}  // namespace cosched

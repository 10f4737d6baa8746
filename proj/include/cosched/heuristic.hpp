#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosched/model.hpp"
#include "cosched/scenario.hpp"

// Two-step coordination heuristic.
//
// Step 1 compacts each portcall in isolation: every temporally flexible
// activity is pulled to exactly tau after its predecessor's end, and every
// spatially flexible activity adopts its predecessor's zone when both stays
// are of the same kind. Durations are never altered and fixed records are
// never touched.
//
// Step 2 resolves the berth conflicts compaction creates. Per berth, stays
// are sorted by start and each conflicting pair is settled by the first
// applicable move: delay the later stay to the blocker's end plus tau if it
// is temporally flexible; otherwise relocate the earlier, then the later,
// stay to a free compatible berth if spatially flexible; as a last resort
// delay the earlier stay past the later one when only it is temporally
// flexible. Passes repeat, re-sorting each time and re-chaining each
// affected portcall, until a pass changes nothing or the pass budget is
// spent. Whatever still overlaps is reported, not silently dropped.

namespace cosched {

struct OpCounters {
  std::uint64_t step1_visits = 0;
  std::uint64_t step2_comparisons = 0;
  std::uint64_t passes = 0;
};

struct ResidualConflict {
  std::string berth_id;
  std::int64_t vessel_a = 0;
  std::size_t portcall_a = 0;
  std::size_t activity_a = 0;
  std::int64_t vessel_b = 0;
  std::size_t portcall_b = 0;
  std::size_t activity_b = 0;
  double overlap_hours = 0.0;
};

// Step 1 only; counters are optional.
ScheduleSet step1_compact(const ScheduleSet& set, double tau_hours,
                          OpCounters* counters = nullptr);

// Lexicographically smallest berth of the compat group, excluding
// exclude_zone, with no stay in the set overlapping [start, end); nullopt
// when every candidate is occupied. Throws std::invalid_argument for an
// unknown group.
std::optional<std::string> find_available_berth(const ScheduleSet& set,
                                                const PortTopology& topology,
                                                Minutes start, Minutes end,
                                                const std::string& compat_group,
                                                const std::string& exclude_zone);

struct DeconflictResult {
  ScheduleSet set;
  std::vector<ResidualConflict> residuals;
  OpCounters counters;
};

// Step 2 only. max_passes = 0 selects the default budget (one pass per
// activity in the set).
DeconflictResult step2_deconflict(ScheduleSet set, const PortTopology& topology,
                                  double tau_hours, std::size_t max_passes = 0);

enum class FlagPolicy {
  sample,         // draw flags from (T, S, seed) before optimizing
  keep_existing,  // trust the flags already on the records
};

struct PortcallOutcome {
  std::int64_t vessel_id = 0;
  Minutes baseline_start = 0;
  double baseline_hours = 0.0;
  double optimized_hours = 0.0;
};

struct OptimizationReport {
  double baseline_mean_hours = 0.0;
  double optimized_mean_hours = 0.0;
  double saved_hours = 0.0;
  double saved_percent = 0.0;
  std::vector<PortcallOutcome> portcalls;
  std::vector<ResidualConflict> residuals;
  OpCounters counters;
  ScheduleSet optimized;
};

// Full pipeline: (sample flags) -> step 1 -> step 2 -> metrics. Portcalls
// are equally weighted within one set. The report's optimized window_end is
// stretched if a delay pushed an activity past the input window.
OptimizationReport optimize(const ScheduleSet& set, const PortTopology& topology,
                            const ScenarioParams& params,
                            FlagPolicy policy = FlagPolicy::sample);

}  // namespace cosched

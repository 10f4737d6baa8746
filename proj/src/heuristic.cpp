#include "cosched/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace cosched {

namespace {

Minutes tau_minutes(double tau_hours) {
  if (tau_hours < 0.0) {
    throw std::invalid_argument("heuristic: negative tau");
  }
  return static_cast<Minutes>(std::llround(tau_hours * 60.0));
}

// Flat handle into a ScheduleSet.
struct ActRef {
  std::size_t pc = 0;
  std::size_t ai = 0;
};

ActivityRecord& deref(ScheduleSet& set, ActRef ref) {
  return set.portcalls[ref.pc].activities[ref.ai];
}

bool overlaps(const ActivityRecord& a, const ActivityRecord& b) {
  return a.start < b.end && b.start < a.end;
}

// Delays one activity to new_start and re-chains the rest of its portcall:
// flexible successors are pushed (never pulled) to predecessor-end + tau,
// fixed successors must already clear the pushed chain or the whole delay
// is refused and nothing is modified.
bool try_delay(ScheduleSet& set, ActRef ref, Minutes new_start, Minutes tau) {
  Portcall& pc = set.portcalls[ref.pc];
  ActivityRecord& target = pc.activities[ref.ai];
  if (target.flag_temporal != Fixedness::flexible) return false;
  if (new_start <= target.start) return true;  // nothing to absorb

  std::vector<Minutes> new_starts(pc.activities.size() - ref.ai);
  new_starts[0] = new_start;
  Minutes prev_end = new_start + target.duration();
  for (std::size_t j = ref.ai + 1; j < pc.activities.size(); ++j) {
    const ActivityRecord& act = pc.activities[j];
    Minutes start = act.start;
    if (act.flag_temporal == Fixedness::flexible) {
      start = std::max(start, prev_end + tau);
    } else if (start < prev_end) {
      return false;  // a pinned stay blocks the push
    }
    new_starts[j - ref.ai] = start;
    prev_end = start + act.duration();
  }
  for (std::size_t j = ref.ai; j < pc.activities.size(); ++j) {
    ActivityRecord& act = pc.activities[j];
    const Minutes dur = act.duration();
    act.start = new_starts[j - ref.ai];
    act.end = act.start + dur;
  }
  return true;
}

// Relocates a spatially flexible berth stay to the smallest free compatible
// berth, timestamps untouched.
bool try_relocate(ScheduleSet& set, const PortTopology& topology, ActRef ref) {
  ActivityRecord& act = deref(set, ref);
  if (act.flag_spatial != Fixedness::flexible) return false;
  if (act.zone_kind != ZoneKind::berth) return false;
  const Zone* zone = topology.find(act.zone_id);
  if (zone == nullptr || zone->compat_group.empty()) return false;
  const auto target = find_available_berth(set, topology, act.start, act.end,
                                           zone->compat_group, act.zone_id);
  if (!target) return false;
  const Zone* dest = topology.find(*target);
  act.zone_id = dest->zone_id;
  act.lat = dest->lat;
  act.lon = dest->lon;
  return true;
}

using BerthTimeline = std::vector<ActRef>;

std::map<std::string, BerthTimeline> berth_timelines(ScheduleSet& set) {
  std::map<std::string, BerthTimeline> out;
  for (std::size_t pi = 0; pi < set.portcalls.size(); ++pi) {
    const Portcall& pc = set.portcalls[pi];
    for (std::size_t ai = 0; ai < pc.activities.size(); ++ai) {
      if (pc.activities[ai].zone_kind == ZoneKind::berth) {
        out[pc.activities[ai].zone_id].push_back({pi, ai});
      }
    }
  }
  for (auto& [id, timeline] : out) {
    std::sort(timeline.begin(), timeline.end(),
              [&](const ActRef& a, const ActRef& b) {
                const ActivityRecord& ra = deref(set, a);
                const ActivityRecord& rb = deref(set, b);
                return std::tie(ra.start, ra.vessel_id, a.pc, a.ai) <
                       std::tie(rb.start, rb.vessel_id, b.pc, b.ai);
              });
  }
  return out;
}

}  // namespace

ScheduleSet step1_compact(const ScheduleSet& set, double tau_hours,
                          OpCounters* counters) {
  const Minutes tau = tau_minutes(tau_hours);
  ScheduleSet out = set;
  for (Portcall& pc : out.portcalls) {
    for (std::size_t i = 0; i < pc.activities.size(); ++i) {
      if (counters != nullptr) ++counters->step1_visits;
      if (i == 0) continue;
      ActivityRecord& cur = pc.activities[i];
      const ActivityRecord& prev = pc.activities[i - 1];
      if (cur.flag_temporal == Fixedness::flexible) {
        const Minutes dur = cur.duration();
        cur.start = prev.end + tau;
        cur.end = cur.start + dur;
      }
      if (cur.flag_spatial == Fixedness::flexible &&
          cur.zone_kind == prev.zone_kind) {
        cur.zone_id = prev.zone_id;
        cur.lat = prev.lat;
        cur.lon = prev.lon;
      }
    }
  }
  return out;
}

std::optional<std::string> find_available_berth(
    const ScheduleSet& set, const PortTopology& topology, Minutes start,
    Minutes end, const std::string& compat_group,
    const std::string& exclude_zone) {
  if (start >= end) {
    throw std::invalid_argument("find_available_berth: degenerate interval");
  }
  for (const std::string& berth : topology.berths_in_group(compat_group)) {
    if (berth == exclude_zone) continue;
    bool occupied = false;
    for (const Portcall& pc : set.portcalls) {
      for (const ActivityRecord& act : pc.activities) {
        if (act.zone_kind == ZoneKind::berth && act.zone_id == berth &&
            act.start < end && start < act.end) {
          occupied = true;
          break;
        }
      }
      if (occupied) break;
    }
    if (!occupied) return berth;
  }
  return std::nullopt;
}

DeconflictResult step2_deconflict(ScheduleSet set, const PortTopology& topology,
                                  double tau_hours, std::size_t max_passes) {
  const Minutes tau = tau_minutes(tau_hours);
  DeconflictResult result;
  if (max_passes == 0) max_passes = std::max<std::size_t>(1, set.activity_count());

  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    ++result.counters.passes;
    bool changed = false;
    auto timelines = berth_timelines(set);
    for (auto& [berth_id, timeline] : timelines) {
      if (timeline.empty()) continue;
      // blocker = the stay with the furthest end seen so far, so clashes
      // hiding behind a long stay are caught in the same pass.
      ActRef blocker = timeline[0];
      for (std::size_t i = 1; i < timeline.size(); ++i) {
        const ActRef cur = timeline[i];
        ++result.counters.step2_comparisons;
        const ActivityRecord& bl = deref(set, blocker);
        const ActivityRecord& cu = deref(set, cur);
        if (!overlaps(bl, cu)) {
          if (cu.end > bl.end) blocker = cur;
          continue;
        }
        if (try_delay(set, cur, bl.end + tau, tau)) {
          changed = true;
          if (deref(set, cur).end > deref(set, blocker).end) blocker = cur;
          continue;
        }
        if (try_relocate(set, topology, blocker)) {
          // The earlier stay left this berth; restart it next pass.
          changed = true;
          break;
        }
        if (try_relocate(set, topology, cur)) {
          changed = true;
          continue;
        }
        if (try_delay(set, blocker, cu.end + tau, tau)) {
          // Only the earlier stay was delayable; it leapfrogs the later one.
          changed = true;
          break;
        }
        // Unresolvable this pass; keep scanning behind the longer stay.
        if (cu.end > bl.end) blocker = cur;
      }
    }
    if (!changed) break;
  }

  // Whatever still overlaps is reported pairwise, per berth, in timeline
  // order. On a valid baseline this only ever pairs fully fixed stays.
  auto timelines = berth_timelines(set);
  for (auto& [berth_id, timeline] : timelines) {
    std::vector<ActRef> active;
    for (const ActRef cur : timeline) {
      const ActivityRecord& cu = deref(set, cur);
      std::erase_if(active, [&](const ActRef a) {
        return deref(set, a).end <= cu.start;
      });
      for (const ActRef a : active) {
        ++result.counters.step2_comparisons;
        const ActivityRecord& ra = deref(set, a);
        const Minutes ov = std::min(ra.end, cu.end) - std::max(ra.start, cu.start);
        result.residuals.push_back({berth_id, ra.vessel_id, a.pc, a.ai,
                                    cu.vessel_id, cur.pc, cur.ai,
                                    to_hours(ov)});
      }
      active.push_back(cur);
    }
  }

  result.set = std::move(set);
  return result;
}

OptimizationReport optimize(const ScheduleSet& set,
                            const PortTopology& topology,
                            const ScenarioParams& params, FlagPolicy policy) {
  check_params(params);
  OptimizationReport report;

  ScheduleSet working =
      policy == FlagPolicy::sample ? sample_flags(set, params) : set;
  working = step1_compact(working, params.tau_hours, &report.counters);
  DeconflictResult dec =
      step2_deconflict(std::move(working), topology, params.tau_hours);
  report.counters.step2_comparisons = dec.counters.step2_comparisons;
  report.counters.passes = dec.counters.passes;
  report.residuals = std::move(dec.residuals);
  report.optimized = std::move(dec.set);

  Minutes content_end = report.optimized.window_end;
  for (const Portcall& pc : report.optimized.portcalls) {
    for (const ActivityRecord& act : pc.activities) {
      content_end = std::max(content_end, act.end);
    }
  }
  report.optimized.window_end = content_end;

  double baseline_sum = 0.0, optimized_sum = 0.0;
  for (std::size_t pi = 0; pi < set.portcalls.size(); ++pi) {
    const Portcall& before = set.portcalls[pi];
    const Portcall& after = report.optimized.portcalls[pi];
    if (before.activities.empty()) continue;
    PortcallOutcome outcome;
    outcome.vessel_id = before.vessel_id;
    outcome.baseline_start = before.activities.front().start;
    outcome.baseline_hours = turnaround_hours(before);
    outcome.optimized_hours = turnaround_hours(after);
    baseline_sum += outcome.baseline_hours;
    optimized_sum += outcome.optimized_hours;
    report.portcalls.push_back(outcome);
  }
  const std::size_t n = report.portcalls.size();
  if (n > 0) {
    report.baseline_mean_hours = baseline_sum / static_cast<double>(n);
    report.optimized_mean_hours = optimized_sum / static_cast<double>(n);
    report.saved_hours =
        report.baseline_mean_hours - report.optimized_mean_hours;
    if (report.baseline_mean_hours > 0.0) {
      report.saved_percent =
          100.0 * report.saved_hours / report.baseline_mean_hours;
    }
  }
  return report;
}

}  // namespace cosched

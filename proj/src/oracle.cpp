#include "cosched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cosched/rng.hpp"
#include "cosched/timeutil.hpp"

namespace cosched {

namespace {

struct NodeId {
  std::size_t pc = 0;
  std::size_t ai = 0;
  bool operator==(const NodeId&) const = default;
};

struct BerthActivity {
  NodeId node;
  std::vector<std::string> candidates;  // allowed berths, sorted
};

// One candidate's placement outcome.
struct Placement {
  bool feasible = false;
  double mean_turnaround_hours = 0.0;
  std::vector<std::vector<Minutes>> starts;  // per portcall per activity
};

Placement place_candidate(const ScheduleSet& set,
                          const std::vector<std::vector<std::size_t>>& queues,
                          const std::vector<std::vector<NodeId>>& queue_nodes,
                          Minutes tau) {
  Placement out;
  const std::size_t n_pcs = set.portcalls.size();

  // Berth predecessor of each node under the chosen per-berth orders.
  std::vector<std::vector<int>> berth_pred(n_pcs);
  std::vector<std::vector<NodeId>> pred_node(n_pcs);
  for (std::size_t pi = 0; pi < n_pcs; ++pi) {
    berth_pred[pi].assign(set.portcalls[pi].activities.size(), -1);
    pred_node[pi].resize(set.portcalls[pi].activities.size());
  }
  for (std::size_t b = 0; b < queues.size(); ++b) {
    for (std::size_t j = 1; j < queues[b].size(); ++j) {
      const NodeId cur = queue_nodes[b][queues[b][j]];
      const NodeId prev = queue_nodes[b][queues[b][j - 1]];
      berth_pred[cur.pc][cur.ai] = 1;
      pred_node[cur.pc][cur.ai] = prev;
    }
  }

  out.starts.resize(n_pcs);
  std::vector<std::vector<bool>> placed(n_pcs);
  for (std::size_t pi = 0; pi < n_pcs; ++pi) {
    out.starts[pi].assign(set.portcalls[pi].activities.size(), 0);
    placed[pi].assign(set.portcalls[pi].activities.size(), false);
  }

  // Fixed-point pass over the dependency DAG; bounded by node count, so a
  // cyclic ordering candidate simply never completes and is infeasible.
  std::size_t total = 0;
  for (std::size_t pi = 0; pi < n_pcs; ++pi) {
    total += set.portcalls[pi].activities.size();
  }
  std::size_t done = 0;
  for (std::size_t round = 0; round <= total && done < total; ++round) {
    bool progressed = false;
    for (std::size_t pi = 0; pi < n_pcs; ++pi) {
      const Portcall& pc = set.portcalls[pi];
      for (std::size_t ai = 0; ai < pc.activities.size(); ++ai) {
        if (placed[pi][ai]) continue;
        if (ai > 0 && !placed[pi][ai - 1]) continue;
        Minutes berth_bound = 0;
        bool has_berth_bound = false;
        if (berth_pred[pi][ai] >= 0) {
          const NodeId bp = pred_node[pi][ai];
          if (!placed[bp.pc][bp.ai]) continue;
          const ActivityRecord& rec = set.portcalls[bp.pc].activities[bp.ai];
          berth_bound = out.starts[bp.pc][bp.ai] + rec.duration();
          has_berth_bound = true;
        }
        const ActivityRecord& act = pc.activities[ai];
        Minutes start;
        if (act.flag_temporal == Fixedness::fixed) {
          start = act.start;
          if (ai > 0) {
            const Minutes prev_end =
                out.starts[pi][ai - 1] + pc.activities[ai - 1].duration();
            if (start < prev_end) return out;  // pinned stay overrun
          }
          if (has_berth_bound && start < berth_bound) return out;
        } else {
          start = ai > 0 ? out.starts[pi][ai - 1] +
                               pc.activities[ai - 1].duration() + tau
                         : act.start;
          if (has_berth_bound) start = std::max(start, berth_bound);
        }
        out.starts[pi][ai] = start;
        placed[pi][ai] = true;
        ++done;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  if (done < total) return out;  // cycle

  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t pi = 0; pi < n_pcs; ++pi) {
    const Portcall& pc = set.portcalls[pi];
    if (pc.activities.empty()) continue;
    const Minutes first = out.starts[pi][0];
    const Minutes last = out.starts[pi][pc.activities.size() - 1] +
                         pc.activities.back().duration();
    sum += to_hours(last - first);
    ++counted;
  }
  out.feasible = true;
  out.mean_turnaround_hours = counted > 0 ? sum / counted : 0.0;
  return out;
}

std::vector<std::vector<std::size_t>> permutations_of(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

}  // namespace

OracleResult brute_force_optimum(const ScheduleSet& set,
                                 const PortTopology& topology,
                                 double tau_hours,
                                 const InstanceLimits& limits) {
  if (static_cast<int>(set.portcalls.size()) > limits.max_vessels) {
    throw std::invalid_argument("oracle: too many vessels");
  }
  int berth_count = 0;
  for (const Zone& z : topology.zones()) {
    if (z.kind == ZoneKind::berth) ++berth_count;
  }
  if (berth_count > limits.max_berths) {
    throw std::invalid_argument("oracle: too many berths");
  }
  for (const Portcall& pc : set.portcalls) {
    if (static_cast<int>(pc.activities.size()) >
        limits.max_activities_per_vessel) {
      throw std::invalid_argument("oracle: too many activities per vessel");
    }
  }
  const auto tau = static_cast<Minutes>(std::llround(tau_hours * 60.0));

  std::vector<BerthActivity> berth_acts;
  for (std::size_t pi = 0; pi < set.portcalls.size(); ++pi) {
    const Portcall& pc = set.portcalls[pi];
    for (std::size_t ai = 0; ai < pc.activities.size(); ++ai) {
      const ActivityRecord& act = pc.activities[ai];
      if (act.zone_kind != ZoneKind::berth) continue;
      BerthActivity ba;
      ba.node = {pi, ai};
      const Zone* zone = topology.find(act.zone_id);
      if (act.flag_spatial == Fixedness::flexible && zone != nullptr &&
          !zone->compat_group.empty()) {
        ba.candidates = topology.berths_in_group(zone->compat_group);
      } else {
        ba.candidates = {act.zone_id};
      }
      berth_acts.push_back(std::move(ba));
    }
  }

  OracleResult result;
  bool found = false;
  std::vector<std::size_t> pick(berth_acts.size(), 0);
  std::vector<std::vector<Minutes>> best_starts;
  std::vector<std::size_t> best_pick;

  while (true) {
    // Group the berth stays by their assigned berth for this candidate.
    std::vector<std::string> berths;
    std::vector<std::vector<NodeId>> queue_nodes;
    for (std::size_t i = 0; i < berth_acts.size(); ++i) {
      const std::string& b = berth_acts[i].candidates[pick[i]];
      auto it = std::find(berths.begin(), berths.end(), b);
      std::size_t slot;
      if (it == berths.end()) {
        slot = berths.size();
        berths.push_back(b);
        queue_nodes.emplace_back();
      } else {
        slot = static_cast<std::size_t>(it - berths.begin());
      }
      queue_nodes[slot].push_back(berth_acts[i].node);
    }

    // Every combination of per-berth service orders.
    std::vector<std::vector<std::vector<std::size_t>>> order_choices;
    for (const auto& nodes : queue_nodes) {
      order_choices.push_back(permutations_of(nodes.size()));
    }
    std::vector<std::size_t> order_pick(queue_nodes.size(), 0);
    while (true) {
      std::vector<std::vector<std::size_t>> queues;
      for (std::size_t b = 0; b < queue_nodes.size(); ++b) {
        queues.push_back(order_choices[b][order_pick[b]]);
      }
      ++result.candidates_evaluated;
      Placement placement = place_candidate(set, queues, queue_nodes, tau);
      if (placement.feasible &&
          (!found ||
           placement.mean_turnaround_hours <
               result.optimal_mean_turnaround_hours - 1e-12)) {
        found = true;
        result.optimal_mean_turnaround_hours = placement.mean_turnaround_hours;
        best_starts = placement.starts;
        best_pick = pick;
      }

      std::size_t d = 0;
      while (d < order_pick.size()) {
        if (++order_pick[d] < order_choices[d].size()) break;
        order_pick[d] = 0;
        ++d;
      }
      if (d == order_pick.size()) break;
    }

    std::size_t d = 0;
    while (d < pick.size()) {
      if (++pick[d] < berth_acts[d].candidates.size()) break;
      pick[d] = 0;
      ++d;
    }
    if (d == pick.size()) break;
  }

  if (!found) throw std::runtime_error("infeasible");

  // Materialize the optimal witness.
  result.schedule = set;
  for (std::size_t pi = 0; pi < result.schedule.portcalls.size(); ++pi) {
    Portcall& pc = result.schedule.portcalls[pi];
    for (std::size_t ai = 0; ai < pc.activities.size(); ++ai) {
      ActivityRecord& act = pc.activities[ai];
      const Minutes dur = act.duration();
      act.start = best_starts[pi][ai];
      act.end = act.start + dur;
    }
  }
  for (std::size_t i = 0; i < berth_acts.size(); ++i) {
    ActivityRecord& act =
        result.schedule.portcalls[berth_acts[i].node.pc]
            .activities[berth_acts[i].node.ai];
    const std::string& berth = berth_acts[i].candidates[best_pick[i]];
    if (const Zone* zone = topology.find(berth)) {
      act.zone_id = zone->zone_id;
      act.lat = zone->lat;
      act.lon = zone->lon;
    } else {
      act.zone_id = berth;
    }
  }
  Minutes content_end = result.schedule.window_end;
  for (const Portcall& pc : result.schedule.portcalls) {
    for (const ActivityRecord& act : pc.activities) {
      content_end = std::max(content_end, act.end);
    }
  }
  result.schedule.window_end = content_end;
  return result;
}

std::vector<OracleInstance> enumerate_instances(const InstanceLimits& limits,
                                                std::uint64_t seed,
                                                std::size_t count) {
  if (limits.max_vessels < 1 || limits.max_berths < 1 ||
      limits.max_activities_per_vessel < 1) {
    throw std::invalid_argument("oracle: degenerate limits");
  }
  const Minutes base = minutes_from_civil(2017, 5, 1);
  std::vector<OracleInstance> out;
  out.reserve(count);

  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed, i));
    OracleInstance inst;

    const auto n_berths =
        1 + static_cast<int>(rng.uniform_int(limits.max_berths));
    for (int b = 0; b < n_berths; ++b) {
      Zone zone;
      zone.zone_id = "B" + std::to_string(b + 1);
      zone.kind = ZoneKind::berth;
      zone.lat = 1265000 + 1500 * b;
      zone.lon = 103820000 + 2500 * b;
      zone.compat_group = "G1";
      inst.topology.add(std::move(zone));
    }
    Zone anch;
    anch.zone_id = "A1";
    anch.kind = ZoneKind::anchorage;
    anch.lat = 1210000;
    anch.lon = 103900000;
    inst.topology.add(anch);

    const int min_vessels = limits.max_vessels >= 2 ? 2 : 1;
    const auto n_vessels =
        min_vessels + static_cast<int>(rng.uniform_int(
                          limits.max_vessels - min_vessels + 1));
    const int mode = static_cast<int>(i % 5);  // 0 all-flexible, 1 all-fixed
    std::vector<Minutes> berth_free(static_cast<std::size_t>(n_berths), base);
    Minutes content_end = base;

    for (int v = 0; v < n_vessels; ++v) {
      Portcall pc;
      pc.vessel_id = 500000000 + v;
      const Minutes arrival =
          base + static_cast<Minutes>(rng.uniform_int(5 * kMinutesPerDay));
      const Minutes anch_dur =
          30 + static_cast<Minutes>(rng.uniform_int(12 * kMinutesPerHour));

      const auto flag = [&] {
        if (mode == 0) return Fixedness::flexible;
        if (mode == 1) return Fixedness::fixed;
        return rng.uniform() < 0.5 ? Fixedness::flexible : Fixedness::fixed;
      };

      ActivityRecord stay;
      stay.vessel_id = pc.vessel_id;
      stay.zone_kind = ZoneKind::anchorage;
      stay.zone_id = "A1";
      stay.lat = anch.lat;
      stay.lon = anch.lon;
      stay.start = arrival;
      stay.end = arrival + anch_dur;
      stay.flag_temporal = flag();
      stay.flag_spatial = flag();
      content_end = std::max(content_end, stay.end);
      pc.activities.push_back(stay);

      const bool with_berth = limits.max_activities_per_vessel >= 2 &&
                              rng.uniform() < 0.9;
      if (with_berth) {
        const auto b = static_cast<std::size_t>(rng.uniform_int(n_berths));
        const Zone& zone = inst.topology.zones()[b];
        const Minutes service =
            kMinutesPerHour +
            static_cast<Minutes>(rng.uniform_int(24 * kMinutesPerHour));
        const Minutes slack =
            static_cast<Minutes>(rng.uniform_int(8 * kMinutesPerHour));
        const Minutes start =
            std::max(pc.activities.back().end + slack, berth_free[b]);
        ActivityRecord berth_stay;
        berth_stay.vessel_id = pc.vessel_id;
        berth_stay.zone_kind = ZoneKind::berth;
        berth_stay.zone_id = zone.zone_id;
        berth_stay.lat = zone.lat;
        berth_stay.lon = zone.lon;
        berth_stay.start = start;
        berth_stay.end = start + service;
        berth_stay.flag_temporal = flag();
        berth_stay.flag_spatial = flag();
        berth_free[b] = berth_stay.end;
        content_end = std::max(content_end, berth_stay.end);
        pc.activities.push_back(berth_stay);
      }
      inst.set.portcalls.push_back(std::move(pc));
    }

    std::sort(inst.set.portcalls.begin(), inst.set.portcalls.end(),
              [](const Portcall& a, const Portcall& b) {
                return std::tie(a.activities.front().start, a.vessel_id) <
                       std::tie(b.activities.front().start, b.vessel_id);
              });
    inst.set.window_start = base;
    inst.set.window_end = content_end;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace cosched

#pragma once

#include <cstdint>
#include <vector>

#include "cosched/model.hpp"

namespace cosched {

// Hard ceilings keeping exhaustive search tractable.
struct InstanceLimits {
  int max_vessels = 4;
  int max_berths = 3;
  int max_activities_per_vessel = 2;
};

struct OracleResult {
  double optimal_mean_turnaround_hours = 0.0;
  ScheduleSet schedule;  // an optimal witness
  std::uint64_t candidates_evaluated = 0;
};

// Exhaustive reference optimum for tiny instances: enumerates every berth
// assignment permitted by flag_spatial and the compat groups, and every
// per-berth service order, left-packing each candidate (temporally fixed
// stays pinned, flexible stays at the latest of predecessor-end + tau along
// the vessel chain and predecessor-end along the berth queue; a portcall's
// first stay never starts before its baseline start). Minimizes the mean
// portcall turnaround with equal weights. Throws std::invalid_argument when
// the instance exceeds limits and std::runtime_error("infeasible") when no
// candidate admits a conflict-free schedule.
OracleResult brute_force_optimum(const ScheduleSet& set,
                                 const PortTopology& topology,
                                 double tau_hours,
                                 const InstanceLimits& limits = {});

struct OracleInstance {
  ScheduleSet set;
  PortTopology topology;
};

// Deterministic stream of random valid instances within the limits. Every
// instance starts each portcall with an anchorage stay; instance i is
// all-flexible when i % 5 == 0, all-fixed when i % 5 == 1, and carries
// independent per-record flags otherwise.
std::vector<OracleInstance> enumerate_instances(const InstanceLimits& limits,
                                                std::uint64_t seed,
                                                std::size_t count);

}  // namespace cosched

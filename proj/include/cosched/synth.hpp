#pragma once

#include <cstdint>

#include "cosched/model.hpp"

namespace cosched {

struct LognormalParams {
  double mu = 0.0;     // of the underlying normal, value in hours
  double sigma = 1.0;
};

// Desk-scale defaults: a month of traffic over a single-terminal port,
// small enough that a full hyper-parameter sweep runs in seconds but with
// enough berth contention that baseline schedules carry real waiting slack.
struct SynthConfig {
  std::int64_t n_vessels = 240;
  int n_berths = 8;
  int n_anchorages = 4;
  int horizon_days = 31;
  double arrival_rate = 6.0;  // portcalls per day (Poisson process)
  LognormalParams anchorage_wait{1.67, 0.50};  // mean ~6 h
  LognormalParams berth_service{3.15, 0.55};   // mean ~27 h
  // Maneuvering slack in the baseline, one hour minimum each: pilotage and
  // tug transit between anchorage departure and all-fast at the berth, and
  // the changeover before the next vessel can take the same berth. This is
  // the slack a compacted schedule squeezes down to the buffer.
  LognormalParams transit_slack{0.55, 0.45};     // mean ~1.9 h
  LognormalParams berth_changeover{0.55, 0.45};  // mean ~1.9 h
  // Probability that a generated vessel's flags come out fixed. 1.0 models
  // the rigid first-come-first-served baseline.
  double fixed_fraction_hint = 1.0;
};

// All generated schedules start at this instant (a Monday opening a 31-day
// month, so the weekly window math is exercised in its reference shape).
inline constexpr Minutes kSynthHorizonStart = minutes_from_civil(2017, 5, 1);

struct SynthResult {
  ScheduleSet set;
  PortTopology topology;
};

// Deterministic: identical (config, seed) reproduce byte-identical CSV
// emissions. Vessels arrive Poisson, hold at an anchorage, then queue
// first-come-first-served for a desired berth; queueing shows up as a gap
// between anchorage departure and berth arrival, capped below the 24 h
// portcall-split threshold by stretching the anchorage stay. Throws
// std::invalid_argument on a non-generable config (no berths with vessels,
// negative rate, hint outside [0,1], ...).
SynthResult generate(const SynthConfig& config, std::uint64_t seed);

}  // namespace cosched

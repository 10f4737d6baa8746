#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cosched/model.hpp"

namespace cosched {

// Hyper-parameters of one optimization scenario. temporal_flex (T) and
// spatial_flex (S) are the probabilities that a vessel agrees to be moved
// in time respectively across berths; tau is the mandatory idle buffer
// between adjacent activities the optimizer places.
struct ScenarioParams {
  double temporal_flex = 0.0;
  double spatial_flex = 0.0;
  double tau_hours = 1.0;
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument unless T, S are in [0,1] and tau >= 0.
void check_params(const ScenarioParams& params);

// Per-vessel Bernoulli draw: with probability T the vessel's flag_temporal
// becomes flexible, independently with probability S its flag_spatial; the
// draw is broadcast to every activity of that vessel. Each vessel's draw is
// seeded by (params.seed, vessel_id), so the result is independent of
// portcall order and stable when the set is sliced.
ScheduleSet sample_flags(const ScheduleSet& set, const ScenarioParams& params);

struct SweepCell {
  int window_weeks = 1;
  double temporal_flex = 0.0;
  double spatial_flex = 0.0;

  bool operator==(const SweepCell&) const = default;
};

// Cartesian product in deterministic order: window_weeks outermost, then T,
// then S. Throws std::invalid_argument on values outside [0,1] or window
// lengths outside {1,2,3}.
std::vector<SweepCell> grid(std::span<const double> t_values,
                            std::span<const double> s_values,
                            std::span<const int> window_weeks);

}  // namespace cosched

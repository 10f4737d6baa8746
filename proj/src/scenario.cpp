#include "cosched/scenario.hpp"

#include <algorithm>
#include <stdexcept>

#include "cosched/rng.hpp"

namespace cosched {

void check_params(const ScenarioParams& params) {
  if (params.temporal_flex < 0.0 || params.temporal_flex > 1.0) {
    throw std::invalid_argument("scenario: temporal_flex outside [0,1]");
  }
  if (params.spatial_flex < 0.0 || params.spatial_flex > 1.0) {
    throw std::invalid_argument("scenario: spatial_flex outside [0,1]");
  }
  if (params.tau_hours < 0.0) {
    throw std::invalid_argument("scenario: negative tau");
  }
}

ScheduleSet sample_flags(const ScheduleSet& set, const ScenarioParams& params) {
  check_params(params);
  ScheduleSet out = set;
  for (Portcall& pc : out.portcalls) {
    Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(pc.vessel_id)));
    const double u_temporal = rng.uniform();
    const double u_spatial = rng.uniform();
    // u < T with probability exactly T; a vessel keeps one draw across all
    // its portcalls because the per-vessel seed repeats.
    const Fixedness ft = u_temporal < params.temporal_flex
                             ? Fixedness::flexible
                             : Fixedness::fixed;
    const Fixedness fs = u_spatial < params.spatial_flex ? Fixedness::flexible
                                                         : Fixedness::fixed;
    for (ActivityRecord& act : pc.activities) {
      act.flag_temporal = ft;
      act.flag_spatial = fs;
    }
  }
  return out;
}

std::vector<SweepCell> grid(std::span<const double> t_values,
                            std::span<const double> s_values,
                            std::span<const int> window_weeks) {
  for (double t : t_values) {
    if (t < 0.0 || t > 1.0) {
      throw std::invalid_argument("grid: T value outside [0,1]");
    }
  }
  for (double s : s_values) {
    if (s < 0.0 || s > 1.0) {
      throw std::invalid_argument("grid: S value outside [0,1]");
    }
  }
  for (int w : window_weeks) {
    if (w < 1 || w > 3) {
      throw std::invalid_argument("grid: window_weeks outside {1,2,3}");
    }
  }
  std::vector<SweepCell> out;
  out.reserve(t_values.size() * s_values.size() * window_weeks.size());
  for (int w : window_weeks) {
    for (double t : t_values) {
      for (double s : s_values) {
        out.push_back({w, t, s});
      }
    }
  }
  return out;
}

}  // namespace cosched

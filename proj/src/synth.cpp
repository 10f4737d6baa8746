#include "cosched/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "cosched/rng.hpp"

namespace cosched {

namespace {

// Queue waits beyond this are absorbed into the anchorage stay so a
// portcall can never straddle the 24 h re-grouping threshold.
constexpr Minutes kMaxBerthGap = 20 * kMinutesPerHour;
constexpr Minutes kMinAnchorageStay = 30;
constexpr Minutes kMinServiceStay = 60;
constexpr Minutes kMinSlack = 60;

std::string padded_id(char prefix, int index) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%c%03d", prefix, index);
  return buf;
}

void check_config(const SynthConfig& cfg) {
  if (cfg.n_vessels < 0) {
    throw std::invalid_argument("synth: negative n_vessels");
  }
  if (cfg.n_vessels > 0 && (cfg.n_berths <= 0 || cfg.n_anchorages <= 0)) {
    throw std::invalid_argument("synth: vessels without berths or anchorages");
  }
  if (cfg.n_berths < 0 || cfg.n_anchorages < 0) {
    throw std::invalid_argument("synth: negative zone count");
  }
  if (cfg.horizon_days <= 0) {
    throw std::invalid_argument("synth: horizon_days must be positive");
  }
  if (cfg.n_vessels > 0 && cfg.arrival_rate <= 0.0) {
    throw std::invalid_argument("synth: arrival_rate must be positive");
  }
  if (cfg.fixed_fraction_hint < 0.0 || cfg.fixed_fraction_hint > 1.0) {
    throw std::invalid_argument("synth: fixed_fraction_hint outside [0,1]");
  }
  if (cfg.anchorage_wait.sigma < 0.0 || cfg.berth_service.sigma < 0.0 ||
      cfg.transit_slack.sigma < 0.0 || cfg.berth_changeover.sigma < 0.0) {
    throw std::invalid_argument("synth: negative lognormal sigma");
  }
}

PortTopology make_topology(const SynthConfig& cfg) {
  PortTopology topo;
  // A plausible equatorial port footprint; berths along a quay line,
  // anchorages offshore. All berths share one compat group by default.
  for (int b = 0; b < cfg.n_berths; ++b) {
    Zone zone;
    zone.zone_id = padded_id('B', b + 1);
    zone.kind = ZoneKind::berth;
    zone.lat = 1265000 + 1500 * b;
    zone.lon = 103820000 + 2500 * b;
    zone.compat_group = "G1";
    topo.add(std::move(zone));
  }
  for (int a = 0; a < cfg.n_anchorages; ++a) {
    Zone zone;
    zone.zone_id = padded_id('A', a + 1);
    zone.kind = ZoneKind::anchorage;
    zone.lat = 1210000 + 9000 * a;
    zone.lon = 103900000 + 11000 * a;
    topo.add(std::move(zone));
  }
  return topo;
}

}  // namespace

SynthResult generate(const SynthConfig& cfg, std::uint64_t seed) {
  check_config(cfg);

  SynthResult out;
  out.topology = make_topology(cfg);
  const Minutes horizon_start = kSynthHorizonStart;
  const Minutes horizon_end =
      horizon_start + static_cast<Minutes>(cfg.horizon_days) * kMinutesPerDay;
  out.set.window_start = horizon_start;
  out.set.window_end = horizon_end;
  if (cfg.n_vessels == 0) return out;

  Rng rng(mix_seed(seed, 0x5ca1eULL));
  const double rate_per_minute = cfg.arrival_rate / kMinutesPerDay;

  std::vector<Minutes> berth_free(static_cast<std::size_t>(cfg.n_berths),
                                  horizon_start);
  Minutes content_end = horizon_end;
  double t = static_cast<double>(horizon_start);

  for (std::int64_t k = 0; k < cfg.n_vessels; ++k) {
    t += rng.exponential(rate_per_minute);
    const auto arrival = static_cast<Minutes>(std::llround(t));
    if (arrival >= horizon_end) break;

    Portcall pc;
    pc.vessel_id = 220000000 + k;

    const auto anch_index =
        static_cast<std::size_t>(rng.uniform_int(cfg.n_anchorages));
    const Zone& anch = out.topology.zones()[cfg.n_berths + anch_index];
    const auto wait = std::max<Minutes>(
        kMinAnchorageStay,
        std::llround(rng.lognormal(cfg.anchorage_wait.mu,
                                   cfg.anchorage_wait.sigma) *
                     kMinutesPerHour));
    Minutes anch_end = arrival + wait;

    const auto berth_index =
        static_cast<std::size_t>(rng.uniform_int(cfg.n_berths));
    const Zone& berth = out.topology.zones()[berth_index];
    const auto service = std::max<Minutes>(
        kMinServiceStay,
        std::llround(
            rng.lognormal(cfg.berth_service.mu, cfg.berth_service.sigma) *
            kMinutesPerHour));
    const auto transit = std::max<Minutes>(
        kMinSlack,
        std::llround(
            rng.lognormal(cfg.transit_slack.mu, cfg.transit_slack.sigma) *
            kMinutesPerHour));
    const auto changeover = std::max<Minutes>(
        kMinSlack,
        std::llround(rng.lognormal(cfg.berth_changeover.mu,
                                   cfg.berth_changeover.sigma) *
                     kMinutesPerHour));

    // First-come-first-served on the desired berth: the vessel sails over
    // once the berth frees up, and sits out any longer queue at anchor.
    Minutes berth_start = std::max(anch_end + transit, berth_free[berth_index]);
    if (berth_start - anch_end > kMaxBerthGap) {
      anch_end = berth_start - kMaxBerthGap;
    }
    const Minutes berth_end = berth_start + service;
    berth_free[berth_index] = berth_end + changeover;
    content_end = std::max(content_end, berth_end);

    Fixedness ft = Fixedness::fixed;
    Fixedness fs = Fixedness::fixed;
    const double u_t = rng.uniform();
    const double u_s = rng.uniform();
    if (u_t >= cfg.fixed_fraction_hint) ft = Fixedness::flexible;
    if (u_s >= cfg.fixed_fraction_hint) fs = Fixedness::flexible;

    ActivityRecord stay;
    stay.vessel_id = pc.vessel_id;
    stay.zone_kind = ZoneKind::anchorage;
    stay.zone_id = anch.zone_id;
    stay.lat = anch.lat;
    stay.lon = anch.lon;
    stay.start = arrival;
    stay.end = anch_end;
    stay.flag_temporal = ft;
    stay.flag_spatial = fs;
    pc.activities.push_back(stay);

    stay.zone_kind = ZoneKind::berth;
    stay.zone_id = berth.zone_id;
    stay.lat = berth.lat;
    stay.lon = berth.lon;
    stay.start = berth_start;
    stay.end = berth_end;
    pc.activities.push_back(std::move(stay));

    out.set.portcalls.push_back(std::move(pc));
  }

  std::sort(out.set.portcalls.begin(), out.set.portcalls.end(),
            [](const Portcall& a, const Portcall& b) {
              return std::tie(a.activities.front().start, a.vessel_id) <
                     std::tie(b.activities.front().start, b.vessel_id);
            });
  out.set.window_end = content_end;
  return out;
}

}  // namespace cosched

#include "cosched/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace cosched {

const char* zone_kind_name(ZoneKind kind) {
  return kind == ZoneKind::anchorage ? "ANCHORAGE" : "BERTH";
}

std::size_t ScheduleSet::activity_count() const {
  std::size_t n = 0;
  for (const Portcall& p : portcalls) n += p.activities.size();
  return n;
}

void PortTopology::add(Zone zone) {
  if (zone.zone_id.empty()) {
    throw std::invalid_argument("topology: empty zone_id");
  }
  if (by_id_.count(zone.zone_id) != 0) {
    throw std::invalid_argument("topology: duplicate zone_id '" +
                                zone.zone_id + "'");
  }
  if (zone.kind == ZoneKind::berth && zone.compat_group.empty()) {
    throw std::invalid_argument("topology: berth '" + zone.zone_id +
                                "' has no compat_group");
  }
  by_id_[zone.zone_id] = zones_.size();
  if (zone.kind == ZoneKind::berth) {
    auto& members = group_berths_[zone.compat_group];
    members.insert(
        std::lower_bound(members.begin(), members.end(), zone.zone_id),
        zone.zone_id);
  }
  zones_.push_back(std::move(zone));
}

const Zone* PortTopology::find(const std::string& zone_id) const {
  const auto it = by_id_.find(zone_id);
  return it == by_id_.end() ? nullptr : &zones_[it->second];
}

const std::vector<std::string>& PortTopology::berths_in_group(
    const std::string& group) const {
  const auto it = group_berths_.find(group);
  if (it == group_berths_.end()) {
    throw std::invalid_argument("topology: unknown compat_group '" + group +
                                "'");
  }
  return it->second;
}

bool PortTopology::has_group(const std::string& group) const {
  return group_berths_.count(group) != 0;
}

double turnaround_hours(const Portcall& portcall) {
  if (portcall.activities.empty()) {
    throw std::invalid_argument("turnaround of an empty portcall");
  }
  const Minutes first = portcall.activities.front().start;
  const Minutes last = portcall.activities.back().end;
  return to_hours(last - first);
}

bool intervals_overlap(Minutes a_start, Minutes a_end, Minutes b_start,
                       Minutes b_end) {
  if (a_start >= a_end || b_start >= b_end) {
    throw std::invalid_argument("intervals_overlap: degenerate interval");
  }
  return a_start < b_end && b_start < a_end;
}

namespace {

struct BerthStayRef {
  Minutes start, end;
  std::int64_t vessel_id;
  std::size_t portcall_index;
  std::size_t activity_index;
};

}  // namespace

std::vector<Violation> validate(const ScheduleSet& set,
                                const PortTopology& topology) {
  std::vector<Violation> out;
  std::map<std::string, std::vector<BerthStayRef>> berth_stays;

  for (std::size_t pi = 0; pi < set.portcalls.size(); ++pi) {
    const Portcall& pc = set.portcalls[pi];
    for (std::size_t ai = 0; ai < pc.activities.size(); ++ai) {
      const ActivityRecord& act = pc.activities[ai];
      const Zone* zone = topology.find(act.zone_id);
      if (zone == nullptr) {
        out.push_back({ViolationKind::unknown_zone, pc.vessel_id, pi, ai,
                       act.zone_id, "zone not in topology"});
      } else if (zone->kind != act.zone_kind) {
        out.push_back({ViolationKind::unknown_zone, pc.vessel_id, pi, ai,
                       act.zone_id,
                       std::string("record says ") +
                           zone_kind_name(act.zone_kind) + ", topology says " +
                           zone_kind_name(zone->kind)});
      }
      if (act.start < set.window_start || act.end > set.window_end) {
        out.push_back({ViolationKind::out_of_window, pc.vessel_id, pi, ai,
                       act.zone_id, "activity outside the set window"});
      }
      if (act.start >= act.end) {
        out.push_back({ViolationKind::unsorted_portcall, pc.vessel_id, pi, ai,
                       act.zone_id, "non-positive duration"});
      } else if (ai > 0) {
        const ActivityRecord& prev = pc.activities[ai - 1];
        if (act.start < prev.start) {
          out.push_back({ViolationKind::unsorted_portcall, pc.vessel_id, pi,
                         ai, act.zone_id, "activities not in start order"});
        } else if (prev.start < prev.end && act.start < prev.end) {
          out.push_back({ViolationKind::unsorted_portcall, pc.vessel_id, pi,
                         ai, act.zone_id,
                         "overlaps the previous activity of the portcall"});
        }
      }
      if (act.zone_kind == ZoneKind::berth && act.start < act.end) {
        berth_stays[act.zone_id].push_back(
            {act.start, act.end, pc.vessel_id, pi, ai});
      }
    }
  }

  // Berth timelines: every overlapping pair, reported once, in timeline
  // order. Anchorages hold any number of vessels and are not checked.
  for (auto& [berth_id, stays] : berth_stays) {
    std::sort(stays.begin(), stays.end(),
              [](const BerthStayRef& a, const BerthStayRef& b) {
                return std::tie(a.start, a.vessel_id, a.portcall_index,
                                a.activity_index) <
                       std::tie(b.start, b.vessel_id, b.portcall_index,
                                b.activity_index);
              });
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < stays.size(); ++i) {
      active.erase(std::remove_if(active.begin(), active.end(),
                                  [&](std::size_t j) {
                                    return stays[j].end <= stays[i].start;
                                  }),
                   active.end());
      for (std::size_t j : active) {
        out.push_back({ViolationKind::same_berth_overlap, stays[j].vessel_id,
                       stays[j].portcall_index, stays[j].activity_index,
                       berth_id,
                       "overlaps vessel " + std::to_string(stays[i].vessel_id) +
                           " at the same berth"});
      }
      active.push_back(i);
    }
  }
  return out;
}

}  // namespace cosched

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cosched/timeutil.hpp"

namespace cosched {

enum class ZoneKind { anchorage, berth };

const char* zone_kind_name(ZoneKind kind);

// 0 = the optimizer may move this dimension, 1 = pinned by the operator.
enum class Fixedness : std::uint8_t { flexible = 0, fixed = 1 };

// One contiguous stay of one vessel in one zone, over the half-open
// interval [start, end).
struct ActivityRecord {
  std::int64_t vessel_id = 0;
  ZoneKind zone_kind = ZoneKind::anchorage;
  std::string zone_id;
  MicroDeg lat = 0;
  MicroDeg lon = 0;
  Minutes start = 0;
  Minutes end = 0;
  Fixedness flag_temporal = Fixedness::fixed;
  Fixedness flag_spatial = Fixedness::fixed;

  Minutes duration() const { return end - start; }
  bool operator==(const ActivityRecord&) const = default;
};

// One complete visit: time-sorted, non-overlapping stays of one vessel.
struct Portcall {
  std::int64_t vessel_id = 0;
  std::vector<ActivityRecord> activities;

  bool operator==(const Portcall&) const = default;
};

struct ScheduleSet {
  std::vector<Portcall> portcalls;
  Minutes window_start = 0;
  Minutes window_end = 0;

  std::size_t activity_count() const;
};

struct Zone {
  std::string zone_id;
  ZoneKind kind = ZoneKind::anchorage;
  MicroDeg lat = 0;
  MicroDeg lon = 0;
  std::string compat_group;  // required for berths, optional for anchorages
};

class PortTopology {
 public:
  // Throws std::invalid_argument on duplicate zone_id or an ungrouped berth.
  void add(Zone zone);

  const Zone* find(const std::string& zone_id) const;
  const std::vector<Zone>& zones() const { return zones_; }

  // Berth zone_ids of one compat group in lexicographic order.
  // Throws std::invalid_argument for a group no berth belongs to.
  const std::vector<std::string>& berths_in_group(
      const std::string& group) const;

  bool has_group(const std::string& group) const;

 private:
  std::vector<Zone> zones_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::vector<std::string>> group_berths_;
};

// Elapsed decimal hours from the first activity start to the last activity
// end. Throws std::invalid_argument for an empty portcall.
double turnaround_hours(const Portcall& portcall);

// Half-open interval overlap; back-to-back stays do not overlap. Throws
// std::invalid_argument if either interval is empty or inverted.
bool intervals_overlap(Minutes a_start, Minutes a_end, Minutes b_start,
                       Minutes b_end);

enum class ViolationKind {
  unknown_zone,
  same_berth_overlap,
  out_of_window,
  unsorted_portcall,
};

struct Violation {
  ViolationKind kind = ViolationKind::unknown_zone;
  std::int64_t vessel_id = 0;
  std::size_t portcall_index = 0;
  std::size_t activity_index = 0;
  std::string zone_id;
  std::string detail;
};

// Full sweep over the set; an empty result is the precondition every
// optimizer entry point assumes. Violations come back in a deterministic
// order (portcall-major, then berth timeline order).
std::vector<Violation> validate(const ScheduleSet& set,
                                const PortTopology& topology);

}  // namespace cosched

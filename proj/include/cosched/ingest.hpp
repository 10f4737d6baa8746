#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cosched/model.hpp"

namespace cosched {

// Malformed input; line is 1-based and counts the header line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string column, const std::string& what);

  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t line_;
  std::string column_;
};

struct ZoneRef {
  std::string zone_id;
  ZoneKind kind = ZoneKind::anchorage;

  bool operator==(const ZoneRef&) const = default;
};

struct ParsedSchedule {
  ScheduleSet set;
  std::vector<ZoneRef> zones_referenced;  // unique, sorted by zone_id
};

// Schedule CSV contract (bit-exact on emit):
//   mmsi,zone_kind,zone_id,lat,lon,start_utc,end_utc,flag_temporal,flag_spatial
// Rows are grouped into portcalls per vessel; a gap of more than 24 h
// between consecutive stays starts a new portcall. The set window is the
// enclosing span of the records.
ParsedSchedule parse_records(std::string_view csv_text);

// Canonical emission: portcalls ordered by (first start, vessel id),
// activities in time order. parse_records(emit_records(s)) reproduces the
// records field for field, and emit is a byte-level left inverse of parse
// on canonical files.
std::string emit_records(const ScheduleSet& set);

// Topology CSV: zone_id,kind,lat,lon,compat_group
PortTopology parse_topology(std::string_view csv_text);
std::string emit_topology(const PortTopology& topology);

// Raw AIS-style position report, for pre-ingest screening.
struct PositionFix {
  std::int64_t vessel_id = 0;
  MicroDeg lat = 0;
  MicroDeg lon = 0;
  Minutes at = 0;
};

enum class AnomalyKind { drift, gap };

struct AnomalyFlag {
  std::int64_t vessel_id = 0;
  std::size_t record_index = 0;  // index of the later fix of the pair
  AnomalyKind kind = AnomalyKind::drift;
  std::string detail;
};

// Screens consecutive same-vessel fixes (input must be time-sorted per
// vessel). A pair yields at most one flag: a silence longer than gap_hours
// is a GAP; otherwise an implied speed above drift_kmh is a DRIFT.
std::vector<AnomalyFlag> flag_anomalies(std::span<const PositionFix> fixes,
                                        double drift_kmh = 100.0,
                                        double gap_hours = 6.0);

// Great-circle distance in km on the mean-radius sphere.
double haversine_km(MicroDeg lat_a, MicroDeg lon_a, MicroDeg lat_b,
                    MicroDeg lon_b);

}  // namespace cosched

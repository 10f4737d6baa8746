#include "cosched/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace cosched {

namespace {

constexpr const char* kScheduleHeader =
    "mmsi,zone_kind,zone_id,lat,lon,start_utc,end_utc,flag_temporal,"
    "flag_spatial";
constexpr const char* kTopologyHeader = "zone_id,kind,lat,lon,compat_group";

constexpr MicroDeg kLatLimit = 90LL * 1000000;
constexpr MicroDeg kLonLimit = 180LL * 1000000;
constexpr Minutes kPortcallGap = 24 * kMinutesPerHour;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

bool split_fields(std::string_view line, std::size_t expected,
                  std::vector<std::string_view>& out) {
  out.clear();
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out.size() == expected;
}

std::optional<std::int64_t> parse_vessel_id(std::string_view s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  if (v <= 0) return std::nullopt;
  return v;
}

std::optional<ZoneKind> parse_zone_kind(std::string_view s) {
  if (s == "ANCHORAGE") return ZoneKind::anchorage;
  if (s == "BERTH") return ZoneKind::berth;
  return std::nullopt;
}

std::optional<Fixedness> parse_flag(std::string_view s) {
  if (s == "0") return Fixedness::flexible;
  if (s == "1") return Fixedness::fixed;
  return std::nullopt;
}

bool valid_zone_id(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ',' || c == '\n' || c == '\r') return false;
  }
  return true;
}

struct RawRow {
  ActivityRecord record;
  std::size_t line;  // 1-based, for diagnostics
};

}  // namespace

ParseError::ParseError(std::size_t line, std::string column,
                       const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         column + ": " + what),
      line_(line),
      column_(std::move(column)) {}

ParsedSchedule parse_records(std::string_view csv_text) {
  const auto lines = split_lines(csv_text);
  if (lines.empty() || lines[0] != kScheduleHeader) {
    throw ParseError(1, "header", "expected '" + std::string(kScheduleHeader) +
                                      "'");
  }

  std::vector<RawRow> rows;
  std::vector<std::string_view> fields;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string_view line = lines[li];
    if (line.empty()) continue;  // tolerate a trailing newline
    const std::size_t lineno = li + 1;
    if (!split_fields(line, 9, fields)) {
      throw ParseError(lineno, "row", "expected 9 comma-separated fields");
    }
    ActivityRecord rec;
    const auto vessel = parse_vessel_id(fields[0]);
    if (!vessel) throw ParseError(lineno, "mmsi", "not a positive integer");
    rec.vessel_id = *vessel;
    const auto kind = parse_zone_kind(fields[1]);
    if (!kind) {
      throw ParseError(lineno, "zone_kind", "expected ANCHORAGE or BERTH");
    }
    rec.zone_kind = *kind;
    if (!valid_zone_id(fields[2])) {
      throw ParseError(lineno, "zone_id", "empty or malformed");
    }
    rec.zone_id = std::string(fields[2]);
    const auto lat = parse_microdeg(fields[3], kLatLimit);
    if (!lat) throw ParseError(lineno, "lat", "not a latitude");
    rec.lat = *lat;
    const auto lon = parse_microdeg(fields[4], kLonLimit);
    if (!lon) throw ParseError(lineno, "lon", "not a longitude");
    rec.lon = *lon;
    const auto start = parse_timestamp(fields[5]);
    if (!start) {
      throw ParseError(lineno, "start_utc",
                       "expected YYYY-MM-DD HH:MM:SS at minute resolution");
    }
    rec.start = *start;
    const auto end = parse_timestamp(fields[6]);
    if (!end) {
      throw ParseError(lineno, "end_utc",
                       "expected YYYY-MM-DD HH:MM:SS at minute resolution");
    }
    rec.end = *end;
    if (rec.end <= rec.start) {
      throw ParseError(lineno, "end_utc", "end does not follow start");
    }
    const auto ft = parse_flag(fields[7]);
    if (!ft) throw ParseError(lineno, "flag_temporal", "expected 0 or 1");
    rec.flag_temporal = *ft;
    const auto fs = parse_flag(fields[8]);
    if (!fs) throw ParseError(lineno, "flag_spatial", "expected 0 or 1");
    rec.flag_spatial = *fs;
    rows.push_back({std::move(rec), lineno});
  }

  // Group per vessel in time order, splitting on gaps above 24 h.
  std::map<std::int64_t, std::vector<RawRow>> by_vessel;
  for (RawRow& row : rows) {
    by_vessel[row.record.vessel_id].push_back(std::move(row));
  }

  std::vector<Portcall> portcalls;
  for (auto& [vessel_id, vrows] : by_vessel) {
    std::stable_sort(vrows.begin(), vrows.end(),
                     [](const RawRow& a, const RawRow& b) {
                       return std::tie(a.record.start, a.record.end) <
                              std::tie(b.record.start, b.record.end);
                     });
    Portcall current;
    current.vessel_id = vessel_id;
    for (std::size_t i = 0; i < vrows.size(); ++i) {
      const ActivityRecord& rec = vrows[i].record;
      if (i > 0) {
        const ActivityRecord& prev = vrows[i - 1].record;
        if (rec.start < prev.end) {
          throw ParseError(vrows[i].line, "start_utc",
                           "overlaps an earlier stay of vessel " +
                               std::to_string(vessel_id));
        }
        if (rec.start - prev.end > kPortcallGap) {
          portcalls.push_back(std::move(current));
          current = Portcall{};
          current.vessel_id = vessel_id;
        }
      }
      current.activities.push_back(rec);
    }
    if (!current.activities.empty()) portcalls.push_back(std::move(current));
  }

  std::sort(portcalls.begin(), portcalls.end(),
            [](const Portcall& a, const Portcall& b) {
              return std::tie(a.activities.front().start, a.vessel_id) <
                     std::tie(b.activities.front().start, b.vessel_id);
            });

  ParsedSchedule out;
  out.set.portcalls = std::move(portcalls);
  if (!out.set.portcalls.empty()) {
    Minutes lo = out.set.portcalls.front().activities.front().start;
    Minutes hi = lo;
    for (const Portcall& pc : out.set.portcalls) {
      for (const ActivityRecord& act : pc.activities) {
        lo = std::min(lo, act.start);
        hi = std::max(hi, act.end);
      }
    }
    out.set.window_start = lo;
    out.set.window_end = hi;
  }

  std::map<std::string, ZoneKind> zones;
  for (const Portcall& pc : out.set.portcalls) {
    for (const ActivityRecord& act : pc.activities) {
      zones.emplace(act.zone_id, act.zone_kind);
    }
  }
  for (const auto& [id, kind] : zones) out.zones_referenced.push_back({id, kind});
  return out;
}

std::string emit_records(const ScheduleSet& set) {
  // Canonical order regardless of in-memory order.
  std::vector<const Portcall*> order;
  order.reserve(set.portcalls.size());
  for (const Portcall& pc : set.portcalls) {
    if (!pc.activities.empty()) order.push_back(&pc);
  }
  std::sort(order.begin(), order.end(), [](const Portcall* a, const Portcall* b) {
    return std::tie(a->activities.front().start, a->vessel_id) <
           std::tie(b->activities.front().start, b->vessel_id);
  });

  std::string out = kScheduleHeader;
  out.push_back('\n');
  for (const Portcall* pc : order) {
    for (const ActivityRecord& act : pc->activities) {
      out += std::to_string(act.vessel_id);
      out.push_back(',');
      out += zone_kind_name(act.zone_kind);
      out.push_back(',');
      out += act.zone_id;
      out.push_back(',');
      out += format_microdeg(act.lat);
      out.push_back(',');
      out += format_microdeg(act.lon);
      out.push_back(',');
      out += format_timestamp(act.start);
      out.push_back(',');
      out += format_timestamp(act.end);
      out.push_back(',');
      out.push_back(act.flag_temporal == Fixedness::fixed ? '1' : '0');
      out.push_back(',');
      out.push_back(act.flag_spatial == Fixedness::fixed ? '1' : '0');
      out.push_back('\n');
    }
  }
  return out;
}

PortTopology parse_topology(std::string_view csv_text) {
  const auto lines = split_lines(csv_text);
  if (lines.empty() || lines[0] != kTopologyHeader) {
    throw ParseError(1, "header", "expected '" + std::string(kTopologyHeader) +
                                      "'");
  }
  PortTopology topo;
  std::vector<std::string_view> fields;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string_view line = lines[li];
    if (line.empty()) continue;
    const std::size_t lineno = li + 1;
    if (!split_fields(line, 5, fields)) {
      throw ParseError(lineno, "row", "expected 5 comma-separated fields");
    }
    Zone zone;
    if (!valid_zone_id(fields[0])) {
      throw ParseError(lineno, "zone_id", "empty or malformed");
    }
    zone.zone_id = std::string(fields[0]);
    const auto kind = parse_zone_kind(fields[1]);
    if (!kind) throw ParseError(lineno, "kind", "expected ANCHORAGE or BERTH");
    zone.kind = *kind;
    const auto lat = parse_microdeg(fields[2], kLatLimit);
    if (!lat) throw ParseError(lineno, "lat", "not a latitude");
    zone.lat = *lat;
    const auto lon = parse_microdeg(fields[3], kLonLimit);
    if (!lon) throw ParseError(lineno, "lon", "not a longitude");
    zone.lon = *lon;
    zone.compat_group = std::string(fields[4]);
    if (zone.kind == ZoneKind::berth && zone.compat_group.empty()) {
      throw ParseError(lineno, "compat_group", "berth without a group");
    }
    try {
      topo.add(std::move(zone));
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, "zone_id", e.what());
    }
  }
  return topo;
}

std::string emit_topology(const PortTopology& topology) {
  std::string out = kTopologyHeader;
  out.push_back('\n');
  for (const Zone& zone : topology.zones()) {
    out += zone.zone_id;
    out.push_back(',');
    out += zone_kind_name(zone.kind);
    out.push_back(',');
    out += format_microdeg(zone.lat);
    out.push_back(',');
    out += format_microdeg(zone.lon);
    out.push_back(',');
    out += zone.compat_group;
    out.push_back('\n');
  }
  return out;
}

double haversine_km(MicroDeg lat_a, MicroDeg lon_a, MicroDeg lat_b,
                    MicroDeg lon_b) {
  constexpr double kEarthRadiusKm = 6371.0088;
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  const double la = static_cast<double>(lat_a) * 1e-6 * kDegToRad;
  const double lb = static_cast<double>(lat_b) * 1e-6 * kDegToRad;
  const double dlat = lb - la;
  const double dlon =
      (static_cast<double>(lon_b) - static_cast<double>(lon_a)) * 1e-6 *
      kDegToRad;
  const double s1 = std::sin(dlat / 2.0), s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(la) * std::cos(lb) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<AnomalyFlag> flag_anomalies(std::span<const PositionFix> fixes,
                                        double drift_kmh, double gap_hours) {
  std::vector<AnomalyFlag> out;
  char buf[96];
  for (std::size_t i = 1; i < fixes.size(); ++i) {
    const PositionFix& prev = fixes[i - 1];
    const PositionFix& cur = fixes[i];
    if (prev.vessel_id != cur.vessel_id) continue;
    const double dt_hours = to_hours(cur.at - prev.at);
    if (dt_hours > gap_hours) {
      std::snprintf(buf, sizeof(buf), "silent for %.2f h (threshold %.2f h)",
                    dt_hours, gap_hours);
      out.push_back({cur.vessel_id, i, AnomalyKind::gap, buf});
      continue;
    }
    const double km = haversine_km(prev.lat, prev.lon, cur.lat, cur.lon);
    // Speed over at least one minute, so a same-minute jump still registers.
    const double speed = km / std::max(dt_hours, 1.0 / 60.0);
    if (speed > drift_kmh) {
      std::snprintf(buf, sizeof(buf),
                    "%.1f km in %.2f h (~%.0f km/h, threshold %.0f km/h)", km,
                    dt_hours, speed, drift_kmh);
      out.push_back({cur.vessel_id, i, AnomalyKind::drift, buf});
    }
  }
  return out;
}

}  // namespace cosched

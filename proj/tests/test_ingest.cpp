#include <doctest.h>

#include <string>
#include <vector>

#include "cosched/ingest.hpp"

using namespace cosched;

namespace {

const char* kHeader =
    "mmsi,zone_kind,zone_id,lat,lon,start_utc,end_utc,flag_temporal,"
    "flag_spatial\n";

std::string schedule_csv(const std::vector<std::string>& rows) {
  std::string out = kHeader;
  for (const std::string& row : rows) {
    out += row;
    out.push_back('\n');
  }
  return out;
}

}  // namespace

TEST_CASE("schedule rows parse field for field") {
  const std::string csv = schedule_csv(
      {"220209000,BERTH,B01,1.277109,103.911774,2017-05-21 18:10:00,"
       "2017-05-22 03:04:00,1,0"});
  const ParsedSchedule parsed = parse_records(csv);
  REQUIRE(parsed.set.portcalls.size() == 1);
  const Portcall& pc = parsed.set.portcalls[0];
  CHECK(pc.vessel_id == 220209000);
  REQUIRE(pc.activities.size() == 1);
  const ActivityRecord& act = pc.activities[0];
  CHECK(act.vessel_id == 220209000);
  CHECK(act.zone_kind == ZoneKind::berth);
  CHECK(act.zone_id == "B01");
  CHECK(act.lat == 1277109);
  CHECK(act.lon == 103911774);
  CHECK(act.start == minutes_from_civil(2017, 5, 21, 18, 10));
  CHECK(act.end == minutes_from_civil(2017, 5, 22, 3, 4));
  CHECK(act.flag_temporal == Fixedness::fixed);
  CHECK(act.flag_spatial == Fixedness::flexible);

  CHECK(parsed.set.window_start == act.start);
  CHECK(parsed.set.window_end == act.end);
  REQUIRE(parsed.zones_referenced.size() == 1);
  CHECK(parsed.zones_referenced[0] == ZoneRef{"B01", ZoneKind::berth});
}

TEST_CASE("stays group into portcalls on the 24 h rule") {
  // Same vessel: anchorage, then berth 2 h later, then a berth visit a
  // clean 25 h after that. Exactly 24 h would still be the same call.
  const std::string csv = schedule_csv({
      "111000111,ANCHORAGE,A01,1.21,103.9,2017-05-01 00:00:00,"
      "2017-05-01 06:00:00,1,1",
      "111000111,BERTH,B01,1.265,103.82,2017-05-01 08:00:00,"
      "2017-05-01 20:00:00,1,1",
      "111000111,BERTH,B01,1.265,103.82,2017-05-02 21:00:00,"
      "2017-05-03 01:00:00,1,1",
  });
  const ParsedSchedule parsed = parse_records(csv);
  REQUIRE(parsed.set.portcalls.size() == 2);
  CHECK(parsed.set.portcalls[0].activities.size() == 2);
  CHECK(parsed.set.portcalls[1].activities.size() == 1);

  // Nudge the last stay to exactly 24 h after the berth departure.
  const std::string csv2 = schedule_csv({
      "111000111,BERTH,B01,1.265,103.82,2017-05-01 08:00:00,"
      "2017-05-01 20:00:00,1,1",
      "111000111,BERTH,B01,1.265,103.82,2017-05-02 20:00:00,"
      "2017-05-03 01:00:00,1,1",
  });
  CHECK(parse_records(csv2).set.portcalls.size() == 1);
}

TEST_CASE("rows arriving shuffled still come out canonical") {
  const std::string csv = schedule_csv({
      "222000222,BERTH,B02,1.2665,103.8225,2017-05-02 10:00:00,"
      "2017-05-02 16:00:00,1,1",
      "111000111,ANCHORAGE,A01,1.21,103.9,2017-05-01 00:00:00,"
      "2017-05-01 06:00:00,0,0",
      "111000111,BERTH,B01,1.265,103.82,2017-05-01 08:00:00,"
      "2017-05-01 20:00:00,0,0",
  });
  const ParsedSchedule parsed = parse_records(csv);
  REQUIRE(parsed.set.portcalls.size() == 2);
  CHECK(parsed.set.portcalls[0].vessel_id == 111000111);
  CHECK(parsed.set.portcalls[1].vessel_id == 222000222);
  REQUIRE(parsed.zones_referenced.size() == 3);
  CHECK(parsed.zones_referenced[0].zone_id == "A01");
  CHECK(parsed.zones_referenced[2].zone_id == "B02");
}

TEST_CASE("parse errors carry line and column") {
  SUBCASE("wrong header") {
    CHECK_THROWS_AS(parse_records("mmsi,zone\n"), ParseError);
    try {
      parse_records("mmsi,zone\n");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == "header");
    }
  }
  SUBCASE("bad flag on a specific line") {
    const std::string csv = schedule_csv({
        "111000111,BERTH,B01,1.265,103.82,2017-05-01 08:00:00,"
        "2017-05-01 20:00:00,1,1",
        "111000111,BERTH,B01,1.265,103.82,2017-05-02 08:00:00,"
        "2017-05-02 20:00:00,2,1",
    });
    try {
      parse_records(csv);
      FAIL("expected a ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == "flag_temporal");
    }
  }
  SUBCASE("field count, mmsi, kind, timestamps, order") {
    CHECK_THROWS_AS(parse_records(schedule_csv({"1,2,3"})), ParseError);
    CHECK_THROWS_AS(parse_records(schedule_csv(
                        {"0,BERTH,B01,1,103,2017-05-01 08:00:00,"
                         "2017-05-01 20:00:00,1,1"})),
                    ParseError);
    CHECK_THROWS_AS(parse_records(schedule_csv(
                        {"1,QUAY,B01,1,103,2017-05-01 08:00:00,"
                         "2017-05-01 20:00:00,1,1"})),
                    ParseError);
    CHECK_THROWS_AS(parse_records(schedule_csv(
                        {"1,BERTH,B01,1,103,2017-05-01 08:00:30,"
                         "2017-05-01 20:00:00,1,1"})),
                    ParseError);
    // end must strictly follow start
    CHECK_THROWS_AS(parse_records(schedule_csv(
                        {"1,BERTH,B01,1,103,2017-05-01 08:00:00,"
                         "2017-05-01 08:00:00,1,1"})),
                    ParseError);
    // overlapping stays of one vessel are rejected outright
    CHECK_THROWS_AS(parse_records(schedule_csv({
                        "1,BERTH,B01,1,103,2017-05-01 08:00:00,"
                        "2017-05-01 20:00:00,1,1",
                        "1,BERTH,B02,1,103,2017-05-01 19:00:00,"
                        "2017-05-01 22:00:00,1,1",
                    })),
                    ParseError);
  }
}

TEST_CASE("emit then parse is a byte-exact round trip") {
  const std::string csv = schedule_csv({
      "111000111,ANCHORAGE,A01,1.21,103.9,2017-05-01 00:00:00,"
      "2017-05-01 06:00:00,0,1",
      "111000111,BERTH,B01,1.265,103.82,2017-05-01 08:00:00,"
      "2017-05-01 20:00:00,1,0",
      "222000222,BERTH,B02,1.2665,103.8225,2017-05-02 10:00:00,"
      "2017-05-02 16:00:00,1,1",
  });
  const ParsedSchedule parsed = parse_records(csv);
  const std::string emitted = emit_records(parsed.set);
  CHECK(emitted == csv);  // input was already canonical
  CHECK(emit_records(parse_records(emitted).set) == emitted);
}

TEST_CASE("topology csv round-trips and validates groups") {
  const std::string csv =
      "zone_id,kind,lat,lon,compat_group\n"
      "B01,BERTH,1.265,103.82,G1\n"
      "B02,BERTH,1.2665,103.8225,G1\n"
      "A01,ANCHORAGE,1.21,103.9,\n";
  const PortTopology topo = parse_topology(csv);
  REQUIRE(topo.zones().size() == 3);
  CHECK(topo.find("B01")->compat_group == "G1");
  CHECK(topo.berths_in_group("G1").size() == 2);
  CHECK(emit_topology(topo) == csv);

  CHECK_THROWS_AS(parse_topology("zone_id,kind\n"), ParseError);
  try {
    parse_topology(
        "zone_id,kind,lat,lon,compat_group\n"
        "B01,BERTH,1.265,103.82,\n");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == "compat_group");
  }
  // duplicate ids surface at the offending line
  try {
    parse_topology(
        "zone_id,kind,lat,lon,compat_group\n"
        "B01,BERTH,1.265,103.82,G1\n"
        "B01,BERTH,1.266,103.83,G1\n");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("position screening flags gaps and drifts") {
  const Minutes t0 = minutes_from_civil(2017, 5, 1);
  std::vector<PositionFix> fixes = {
      {900100100, 1210000, 103900000, t0},
      // 2 h later, 5 km away: ~2.5 km/h, clean.
      {900100100, 1255000, 103900000, t0 + 120},
      // 7 h of silence: a gap, distance ignored.
      {900100100, 1255000, 103900000, t0 + 120 + 420},
      // 30 min later, ~111 km away: far above 100 km/h.
      {900100100, 2255000, 103900000, t0 + 120 + 420 + 30},
      // Different vessel immediately after: never paired.
      {900200200, 1210000, 103900000, t0 + 1000},
  };
  const auto flags = flag_anomalies(fixes);
  REQUIRE(flags.size() == 2);
  CHECK(flags[0].kind == AnomalyKind::gap);
  CHECK(flags[0].vessel_id == 900100100);
  CHECK(flags[0].record_index == 2);
  CHECK(flags[1].kind == AnomalyKind::drift);
  CHECK(flags[1].record_index == 3);

  SUBCASE("thresholds are strict") {
    // Exactly 6 h of silence is not a gap; exactly 100 km/h not a drift.
    std::vector<PositionFix> edge = {
        {1, 0, 0, 0},
        {1, 0, 0, 360},
        // 50 km in exactly 30 min => 100 km/h on the nose.
        {1, 449611, 0, 390},
    };
    CHECK(flag_anomalies(edge).empty());
  }
  SUBCASE("a same-minute jump still registers as drift") {
    std::vector<PositionFix> jump = {
        {1, 0, 0, 0},
        {1, 200000, 0, 0},  // ~22 km in zero time
    };
    const auto out = flag_anomalies(jump);
    REQUIRE(out.size() == 1);
    CHECK(out[0].kind == AnomalyKind::drift);
  }
}

TEST_CASE("haversine matches known distances") {
  CHECK(haversine_km(1277109, 103911774, 1277109, 103911774) == 0.0);
  // One degree of latitude on the mean-radius sphere.
  CHECK(haversine_km(0, 0, 1000000, 0) == doctest::Approx(111.195).epsilon(0.001));
  // Symmetry.
  CHECK(haversine_km(1210000, 103900000, 1265000, 103820000) ==
        doctest::Approx(haversine_km(1265000, 103820000, 1210000, 103900000)));
}

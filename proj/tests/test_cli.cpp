#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/stat.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cosched/heuristic.hpp"
#include "cosched/ingest.hpp"
#include "cosched/model.hpp"
#include "cosched/oracle.hpp"
#include "cosched/synth.hpp"
#include "cosched/timeutil.hpp"

using namespace cosched;

namespace {

std::string g_binary;

// Scratch directory shared by all cases, created once per process.
const std::string& tmp_dir() {
  static std::string dir = [] {
    char pattern[] = "/tmp/coschedule_cli_XXXXXX";
    const char* made = mkdtemp(pattern);
    REQUIRE(made != nullptr);
    return std::string(made);
  }();
  return dir;
}

std::string tmp_path(const std::string& name) { return tmp_dir() + "/" + name; }

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = g_binary + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.output.append(buf, n);
  }
  const int status = pclose(pipe);
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << content;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

const char* kResultsHeader =
    "window_weeks,t,s,seed,benchmark_hours,saved_hours,saved_percent,"
    "residual_conflicts,step2_comparisons";

ActivityRecord stay(std::int64_t vessel, ZoneKind kind, const std::string& zone,
                    Minutes start, Minutes end, Fixedness ft, Fixedness fs) {
  ActivityRecord rec;
  rec.vessel_id = vessel;
  rec.zone_kind = kind;
  rec.zone_id = zone;
  rec.lat = kind == ZoneKind::berth ? 1250000 : 1210000;
  rec.lon = 103800000;
  rec.start = start;
  rec.end = end;
  rec.flag_temporal = ft;
  rec.flag_spatial = fs;
  return rec;
}

// Three vessels on one berth, anchorage stays pinned and berth stays
// temporally flexible, with generous baseline slack so the two-step result
// is provably optimal.
ScheduleSet chain_fixture() {
  const Minutes base = minutes_from_civil(2017, 5, 1);
  ScheduleSet set;
  set.window_start = base;
  set.window_end = base + 7 * 24 * 60;

  const auto vessel = [&](std::int64_t id, Minutes anch_start,
                          Minutes anch_end, Minutes berth_start,
                          Minutes berth_end) {
    Portcall call;
    call.vessel_id = id;
    call.activities.push_back(stay(id, ZoneKind::anchorage, "A1",
                                   base + anch_start, base + anch_end,
                                   Fixedness::fixed, Fixedness::fixed));
    call.activities.push_back(stay(id, ZoneKind::berth, "B1",
                                   base + berth_start, base + berth_end,
                                   Fixedness::flexible, Fixedness::fixed));
    set.portcalls.push_back(std::move(call));
  };
  vessel(101, 0, 360, 480, 900);
  vessel(102, 600, 960, 1200, 1500);
  vessel(103, 1300, 1600, 1800, 2100);
  return set;
}

PortTopology chain_topology() {
  PortTopology topology;
  topology.add({"A1", ZoneKind::anchorage, 1210000, 103800000, ""});
  topology.add({"B1", ZoneKind::berth, 1250000, 103800000, "G1"});
  return topology;
}

}  // namespace

TEST_CASE("synth writes canonical deterministic files") {
  const std::string sched_a = tmp_path("synth_a.csv");
  const std::string topo_a = tmp_path("synth_topo_a.csv");
  const RunResult first = run_cli(
      "synth --vessels 12 --berths 3 --anchorages 2 --days 7 --rate 10 "
      "--seed 5 -o " + sched_a + " --topology " + topo_a);
  CHECK(first.exit_code == 0);

  const ParsedSchedule parsed = parse_records(slurp(sched_a));
  CHECK(!parsed.set.portcalls.empty());
  CHECK(emit_records(parsed.set) == slurp(sched_a));
  const PortTopology topology = parse_topology(slurp(topo_a));
  CHECK(topology.zones().size() == 5);
  CHECK(validate(parsed.set, topology).empty());

  const std::string sched_b = tmp_path("synth_b.csv");
  const std::string topo_b = tmp_path("synth_topo_b.csv");
  const RunResult second = run_cli(
      "synth --vessels 12 --berths 3 --anchorages 2 --days 7 --rate 10 "
      "--seed 5 -o " + sched_b + " --topology " + topo_b);
  CHECK(second.exit_code == 0);
  CHECK(slurp(sched_a) == slurp(sched_b));
  CHECK(slurp(topo_a) == slurp(topo_b));
}

TEST_CASE("synth with a zero vessel cap emits only headers and zones") {
  const std::string sched = tmp_path("synth_empty.csv");
  const std::string topo = tmp_path("synth_empty_topo.csv");
  const RunResult run = run_cli("synth --vessels 0 --seed 1 -o " + sched +
                                " --topology " + topo);
  CHECK(run.exit_code == 0);

  SynthConfig config;
  config.n_vessels = 0;
  const SynthResult expected = generate(config, 1);
  CHECK(slurp(sched) == emit_records(expected.set));
  CHECK(slurp(topo) == emit_topology(expected.topology));
}

TEST_CASE("synth rejects an invalid configuration with a usage error") {
  const RunResult run = run_cli("synth --berths 0 --vessels 5 -o " +
                                tmp_path("no.csv") + " --topology " +
                                tmp_path("no_topo.csv"));
  CHECK(run.exit_code == 2);
}

TEST_CASE("optimize keeps a fully fixed schedule byte for byte") {
  const std::string sched = tmp_path("rigid.csv");
  const std::string topo = tmp_path("rigid_topo.csv");
  REQUIRE(run_cli("synth --vessels 10 --days 7 --seed 3 -o " + sched +
                  " --topology " + topo)
              .exit_code == 0);

  const std::string out = tmp_path("rigid_opt.csv");
  const RunResult run = run_cli("optimize --input " + sched + " --topology " +
                                topo + " -o " + out);
  CHECK(run.exit_code == 0);
  CHECK(slurp(out) == slurp(sched));

  const nlohmann::json report = nlohmann::json::parse(run.output);
  CHECK(report.at("saved_hours").get<double>() == 0.0);
  CHECK(report.at("baseline_mean_hours").get<double>() ==
        report.at("optimized_mean_hours").get<double>());
  CHECK(report.at("residual_conflicts").empty());
  CHECK(report.at("vessels").size() == report.at("portcalls").get<std::size_t>());
  CHECK(report.at("counters").contains("step2_comparisons"));
}

TEST_CASE("optimize matches the library and the exhaustive reference") {
  const ScheduleSet set = chain_fixture();
  const PortTopology topology = chain_topology();
  const std::string sched = tmp_path("chain.csv");
  const std::string topo = tmp_path("chain_topo.csv");
  spit(sched, emit_records(set));
  spit(topo, emit_topology(topology));

  const std::string out = tmp_path("chain_opt.csv");
  const std::string report_path = tmp_path("chain_report.json");
  const RunResult run = run_cli("optimize --input " + sched + " --topology " +
                                topo + " -o " + out + " --report " +
                                report_path);
  CHECK(run.exit_code == 0);
  CHECK(run.output.empty());

  ScenarioParams params;
  const OptimizationReport expected =
      optimize(set, topology, params, FlagPolicy::keep_existing);
  CHECK(slurp(out) == emit_records(expected.optimized));

  const nlohmann::json report = nlohmann::json::parse(slurp(report_path));
  CHECK(report.at("saved_hours").get<double>() ==
        doctest::Approx(expected.saved_hours).epsilon(1e-12));
  CHECK(report.at("portcalls").get<std::size_t>() == 3);

  const OracleResult oracle = brute_force_optimum(set, topology, 1.0);
  const double oracle_saved =
      expected.baseline_mean_hours - oracle.optimal_mean_turnaround_hours;
  CHECK(report.at("saved_hours").get<double>() ==
        doctest::Approx(oracle_saved).epsilon(1e-9));
}

TEST_CASE("optimize flag errors are usage errors") {
  const std::string sched = tmp_path("flags.csv");
  const std::string topo = tmp_path("flags_topo.csv");
  REQUIRE(run_cli("synth --vessels 5 --days 7 --seed 2 -o " + sched +
                  " --topology " + topo)
              .exit_code == 0);

  CHECK(run_cli("optimize --input " + sched + " --topology " + topo +
                " --t 0.4")
            .exit_code == 2);
  CHECK(run_cli("optimize --input " + sched + " --topology " + topo +
                " --s 0.4")
            .exit_code == 2);
  CHECK(run_cli("optimize --input " + sched + " --topology " + topo +
                " --t 1.1 --s 0.5")
            .exit_code == 2);
  CHECK(run_cli("optimize --input " + sched + " --topology " + topo +
                " --t 0.5 --s 0.5 --tau -1")
            .exit_code == 2);
}

TEST_CASE("optimize reports data errors for bad inputs") {
  const std::string topo = tmp_path("data_topo.csv");
  const std::string sched = tmp_path("data.csv");
  REQUIRE(run_cli("synth --vessels 5 --days 7 --seed 2 -o " + sched +
                  " --topology " + topo)
              .exit_code == 0);

  CHECK(run_cli("optimize --input " + tmp_path("absent.csv") +
                " --topology " + topo)
            .exit_code == 1);

  const std::string garbage = tmp_path("garbage.csv");
  spit(garbage, "this,is,not\na,schedule\n");
  CHECK(run_cli("optimize --input " + garbage + " --topology " + topo)
            .exit_code == 1);

  // Schedule referencing a zone the topology does not know.
  PortTopology small;
  small.add({"A1", ZoneKind::anchorage, 1210000, 103800000, ""});
  small.add({"B9", ZoneKind::berth, 1250000, 103800000, "G1"});
  const std::string small_topo = tmp_path("small_topo.csv");
  spit(small_topo, emit_topology(small));
  const std::string chain = tmp_path("unknown_zone.csv");
  spit(chain, emit_records(chain_fixture()));
  CHECK(run_cli("optimize --input " + chain + " --topology " + small_topo)
            .exit_code == 1);
}

TEST_CASE("sweep defaults produce the full grid on stdout") {
  const RunResult run = run_cli("sweep");
  CHECK(run.exit_code == 0);

  const std::vector<std::string> lines = lines_of(run.output);
  REQUIRE(lines.size() == 26);
  CHECK(lines[0] == kResultsHeader);
  CHECK(lines[1].rfind("1,0.10,0.10,1,", 0) == 0);
  CHECK(lines[2].rfind("1,0.10,0.30,1,", 0) == 0);
  CHECK(lines[25].rfind("1,0.90,0.90,1,", 0) == 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].rfind("1,", 0) == 0);
  }
}

TEST_CASE("sweep covers every requested window length") {
  const std::string out = tmp_path("sweep_weeks.csv");
  const RunResult run = run_cli(
      "sweep --t 0.9 --s 0.9 --weeks 1,2,3 --seeds 2 -o " + out);
  CHECK(run.exit_code == 0);

  const std::vector<std::string> lines = lines_of(slurp(out));
  REQUIRE(lines.size() == 7);
  CHECK(lines[1].rfind("1,0.90,0.90,1,", 0) == 0);
  CHECK(lines[2].rfind("1,0.90,0.90,2,", 0) == 0);
  CHECK(lines[3].rfind("2,0.90,0.90,1,", 0) == 0);
  CHECK(lines[6].rfind("3,0.90,0.90,2,", 0) == 0);
}

TEST_CASE("sweep output does not depend on the worker count") {
  const std::string serial = tmp_path("sweep_serial.csv");
  const std::string parallel = tmp_path("sweep_parallel.csv");
  CHECK(run_cli("sweep --t 0.1,0.5 --s 0.3 --seeds 3 --jobs 1 -o " + serial)
            .exit_code == 0);
  CHECK(run_cli("sweep --t 0.1,0.5 --s 0.3 --seeds 3 --jobs 4 -o " + parallel)
            .exit_code == 0);
  CHECK(slurp(serial) == slurp(parallel));
}

TEST_CASE("sweep accepts an explicit dataset") {
  const std::string sched = tmp_path("sweep_in.csv");
  const std::string topo = tmp_path("sweep_in_topo.csv");
  REQUIRE(run_cli("synth --vessels 40 --days 14 --seed 9 -o " + sched +
                  " --topology " + topo)
              .exit_code == 0);

  const std::string out = tmp_path("sweep_in_results.csv");
  const RunResult run = run_cli("sweep --input " + sched + " --topology " +
                                topo + " --t 0.5 --s 0.5 --seeds 2 -o " + out);
  CHECK(run.exit_code == 0);
  CHECK(lines_of(slurp(out)).size() == 3);
}

TEST_CASE("sweep argument errors are usage errors") {
  CHECK(run_cli("sweep --t 0.5,oops").exit_code == 2);
  CHECK(run_cli("sweep --t 1.5").exit_code == 2);
  CHECK(run_cli("sweep --weeks 4").exit_code == 2);
  CHECK(run_cli("sweep --seeds 0").exit_code == 2);
  CHECK(run_cli("sweep --jobs 0").exit_code == 2);
  CHECK(run_cli("sweep --input " + tmp_path("x.csv")).exit_code == 2);
}

TEST_CASE("report renders a summary and per-cell series files") {
  const std::string results = tmp_path("report_results.csv");
  REQUIRE(run_cli("sweep --t 0.1,0.9 --s 0.5 --weeks 1,2 --seeds 2 -o " +
                  results)
              .exit_code == 0);

  const std::string out_dir = tmp_path("report_out");
  REQUIRE(mkdir(out_dir.c_str(), 0755) == 0);
  const RunResult run =
      run_cli("report --results " + results + " --out-dir " + out_dir);
  CHECK(run.exit_code == 0);

  const std::string summary = slurp(out_dir + "/summary.txt");
  CHECK(summary == run.output);
  CHECK(summary.find("Observation window: 1 week") != std::string::npos);
  CHECK(summary.find("Observation window: 2 weeks") != std::string::npos);
  CHECK(summary.find("2 seeds") != std::string::npos);
  CHECK(summary.find("T=0.10") != std::string::npos);
  CHECK(summary.find("S=0.50") != std::string::npos);
  CHECK(summary.find("(seed stddev of percent)") != std::string::npos);

  for (const char* name : {"series_t0.10_s0.50.csv", "series_t0.90_s0.50.csv"}) {
    const std::vector<std::string> lines = lines_of(slurp(out_dir + "/" + name));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "window_weeks,mean_saved_hours,mean_saved_percent,"
          "stddev_saved_percent,seeds");
    CHECK(lines[1].rfind("1,", 0) == 0);
    CHECK(lines[2].rfind("2,", 0) == 0);
    CHECK(lines[1].substr(lines[1].size() - 2) == ",2");
  }
}

TEST_CASE("report cells show mean hours and percent") {
  // A handwritten results file with known numbers: two seeds averaging to
  // 10.00 hours and 12.50 percent.
  const std::string results = tmp_path("report_known.csv");
  std::string text = std::string(kResultsHeader) + "\n";
  text += "1,0.50,0.50,1,80.000000,8.000000,10.000000,0,10\n";
  text += "1,0.50,0.50,2,80.000000,12.000000,15.000000,0,10\n";
  spit(results, text);

  const std::string out_dir = tmp_path("report_known_out");
  REQUIRE(mkdir(out_dir.c_str(), 0755) == 0);
  const RunResult run =
      run_cli("report --results " + results + " --out-dir " + out_dir);
  CHECK(run.exit_code == 0);
  CHECK(run.output.find("10.00 / 12.50%") != std::string::npos);

  const std::vector<std::string> series =
      lines_of(slurp(out_dir + "/series_t0.50_s0.50.csv"));
  REQUIRE(series.size() == 2);
  CHECK(series[1] == "1,10.000000,12.500000,3.535534,2");
}

TEST_CASE("report rejects missing, empty, and malformed results") {
  CHECK(run_cli("report --results " + tmp_path("absent_results.csv"))
            .exit_code == 1);

  const std::string header_only = tmp_path("header_only.csv");
  spit(header_only, std::string(kResultsHeader) + "\n");
  CHECK(run_cli("report --results " + header_only).exit_code == 1);

  const std::string bad_header = tmp_path("bad_header.csv");
  spit(bad_header, "nope\n1,2,3\n");
  CHECK(run_cli("report --results " + bad_header).exit_code == 1);

  const std::string bad_row = tmp_path("bad_row.csv");
  spit(bad_row, std::string(kResultsHeader) + "\n1,0.5,0.5,zero,1,1,1,0,0\n");
  CHECK(run_cli("report --results " + bad_row).exit_code == 1);
}

TEST_CASE("top level usage errors") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("synth").exit_code == 2);

  const RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.output.find("synth") != std::string::npos);
  CHECK(help.output.find("sweep") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc > 1 && argv[1][0] != '-') {
    g_binary = argv[1];
    --argc;
    ++argv;
    argv[0] = const_cast<char*>("cli_tests");
  }
  if (g_binary.empty()) {
    std::fprintf(stderr, "usage: cli_tests <path-to-coschedule> [doctest args]\n");
    return 1;
  }
  doctest::Context context;
  context.applyCommandLine(argc, argv);
  return context.run();
}

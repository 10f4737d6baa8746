// coschedule: synthetic schedule generation, two-step optimization, grid
// sweeps over the flexibility hyper-parameters, and table-shaped reports.
//
// Exit codes: 0 success, 1 data error (unreadable or malformed files),
// 2 usage error (bad flags or parameter values).

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cosched/heuristic.hpp"
#include "cosched/horizon.hpp"
#include "cosched/ingest.hpp"
#include "cosched/model.hpp"
#include "cosched/scenario.hpp"
#include "cosched/synth.hpp"
#include "cosched/timeutil.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

// Thrown for problems with file contents or referenced data.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("read failed on '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw DataError("write failed on '" + path + "'");
}

std::string fmt(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(flag) + ": bad number '" + item +
                                  "'");
    }
    if (used != item.size()) {
      throw std::invalid_argument(std::string(flag) + ": bad number '" + item +
                                  "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw std::invalid_argument(std::string(flag) + ": empty list");
  }
  return out;
}

std::vector<int> parse_weeks_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text, "--weeks")) {
    const int w = static_cast<int>(v);
    if (v != w || w < 1 || w > 3) {
      throw std::invalid_argument("--weeks: values must be 1, 2 or 3");
    }
    out.push_back(w);
  }
  return out;
}

void require_known_zones(const cosched::ScheduleSet& set,
                         const cosched::PortTopology& topology) {
  for (const cosched::Violation& v : cosched::validate(set, topology)) {
    if (v.kind == cosched::ViolationKind::unknown_zone) {
      throw DataError("zone '" + v.zone_id + "' of vessel " +
                      std::to_string(v.vessel_id) + " is not in the topology");
    }
  }
}

// ---------------------------------------------------------------- synth --

struct SynthArgs {
  std::string out;
  std::string topology;
  std::uint64_t seed = 0;
  cosched::SynthConfig config;
};

int cmd_synth(const SynthArgs& args) {
  cosched::SynthResult result;
  try {
    result = cosched::generate(args.config, args.seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "synth: " << e.what() << "\n";
    return kExitUsage;
  }
  write_file(args.out, cosched::emit_records(result.set));
  write_file(args.topology, cosched::emit_topology(result.topology));
  return kExitOk;
}

// ------------------------------------------------------------- optimize --

struct OptimizeArgs {
  std::string input;
  std::string topology;
  double t = 0.0;
  double s = 0.0;
  bool has_t = false;
  bool has_s = false;
  double tau = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string report_path;
};

ordered_json report_to_json(const cosched::OptimizationReport& report) {
  ordered_json j;
  j["baseline_mean_hours"] = report.baseline_mean_hours;
  j["optimized_mean_hours"] = report.optimized_mean_hours;
  j["saved_hours"] = report.saved_hours;
  j["saved_percent"] = report.saved_percent;
  j["portcalls"] = report.portcalls.size();
  j["counters"] = {{"step1_visits", report.counters.step1_visits},
                   {"step2_comparisons", report.counters.step2_comparisons},
                   {"passes", report.counters.passes}};
  ordered_json vessels = ordered_json::array();
  for (const cosched::PortcallOutcome& o : report.portcalls) {
    vessels.push_back(
        {{"mmsi", o.vessel_id},
         {"baseline_start", cosched::format_timestamp(o.baseline_start)},
         {"baseline_hours", o.baseline_hours},
         {"optimized_hours", o.optimized_hours},
         {"saved_hours", o.baseline_hours - o.optimized_hours}});
  }
  j["vessels"] = std::move(vessels);
  ordered_json residuals = ordered_json::array();
  for (const cosched::ResidualConflict& r : report.residuals) {
    residuals.push_back({{"berth", r.berth_id},
                         {"mmsi_a", r.vessel_a},
                         {"mmsi_b", r.vessel_b},
                         {"overlap_hours", r.overlap_hours}});
  }
  j["residual_conflicts"] = std::move(residuals);
  return j;
}

int cmd_optimize(const OptimizeArgs& args) {
  if (args.has_t != args.has_s) {
    std::cerr << "optimize: --t and --s must be given together\n";
    return kExitUsage;
  }
  cosched::ScenarioParams params;
  params.temporal_flex = args.t;
  params.spatial_flex = args.s;
  params.tau_hours = args.tau;
  params.seed = args.seed;
  try {
    cosched::check_params(params);
  } catch (const std::invalid_argument& e) {
    std::cerr << "optimize: " << e.what() << "\n";
    return kExitUsage;
  }
  const cosched::ParsedSchedule parsed =
      cosched::parse_records(read_file(args.input));
  const cosched::PortTopology topology =
      cosched::parse_topology(read_file(args.topology));
  require_known_zones(parsed.set, topology);

  const cosched::FlagPolicy policy = args.has_t
                                         ? cosched::FlagPolicy::sample
                                         : cosched::FlagPolicy::keep_existing;
  const cosched::OptimizationReport report =
      cosched::optimize(parsed.set, topology, params, policy);

  if (!args.out.empty()) {
    write_file(args.out, cosched::emit_records(report.optimized));
  }
  const std::string json_text = report_to_json(report).dump(2) + "\n";
  if (args.report_path.empty()) {
    std::cout << json_text;
  } else {
    write_file(args.report_path, json_text);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sweep --

struct SweepArgs {
  std::string input;
  std::string topology;
  std::string t_list = "0.1,0.3,0.5,0.7,0.9";
  std::string s_list = "0.1,0.3,0.5,0.7,0.9";
  std::string weeks_list = "1";
  int seeds = 1;
  double tau = 1.0;
  int jobs = 1;
  std::string out;
};

constexpr char kResultsHeader[] =
    "window_weeks,t,s,seed,benchmark_hours,saved_hours,saved_percent,"
    "residual_conflicts,step2_comparisons";

int cmd_sweep(const SweepArgs& args) {
  std::vector<double> t_values, s_values;
  std::vector<int> weeks;
  try {
    t_values = parse_double_list(args.t_list, "--t");
    s_values = parse_double_list(args.s_list, "--s");
    weeks = parse_weeks_list(args.weeks_list);
    if (args.seeds < 1) throw std::invalid_argument("--seeds: must be >= 1");
    if (args.jobs < 1) throw std::invalid_argument("--jobs: must be >= 1");
    for (double v : t_values) {
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument("--t: values must lie in [0, 1]");
      }
    }
    for (double v : s_values) {
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument("--s: values must lie in [0, 1]");
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return kExitUsage;
  }

  // One dataset per seed: the given files, or default synthetic traffic.
  std::vector<cosched::ScheduleSet> sets;
  std::vector<cosched::PortTopology> topologies;
  if (!args.input.empty()) {
    const cosched::ParsedSchedule parsed =
        cosched::parse_records(read_file(args.input));
    cosched::PortTopology topology =
        cosched::parse_topology(read_file(args.topology));
    require_known_zones(parsed.set, topology);
    sets.push_back(parsed.set);
    topologies.push_back(std::move(topology));
  } else {
    const cosched::SynthConfig config;
    for (int k = 0; k < args.seeds; ++k) {
      cosched::SynthResult r =
          cosched::generate(config, static_cast<std::uint64_t>(k + 1));
      sets.push_back(std::move(r.set));
      topologies.push_back(std::move(r.topology));
    }
  }

  struct Task {
    int weeks;
    double t, s;
    int seed;
    std::size_t dataset;
  };
  std::vector<Task> tasks;
  for (int w : weeks) {
    for (double t : t_values) {
      for (double s : s_values) {
        for (int k = 0; k < args.seeds; ++k) {
          const std::size_t dataset = args.input.empty() ? k : 0;
          tasks.push_back({w, t, s, k + 1, dataset});
        }
      }
    }
  }

  std::vector<std::string> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      cosched::ScenarioParams params;
      params.temporal_flex = task.t;
      params.spatial_flex = task.s;
      params.tau_hours = args.tau;
      params.seed = static_cast<std::uint64_t>(task.seed);
      const cosched::RollingReport report =
          cosched::run_rolling(sets[task.dataset], topologies[task.dataset],
                               params, task.weeks);
      std::ostringstream row;
      row << task.weeks << ',' << fmt(task.t, 2) << ',' << fmt(task.s, 2)
          << ',' << task.seed << ',' << fmt(report.benchmark_hours, 6) << ','
          << fmt(report.saved_hours, 6) << ',' << fmt(report.saved_percent, 6)
          << ',' << report.residual_conflicts << ','
          << report.counters.step2_comparisons;
      rows[i] = row.str();
    }
  };
  const std::size_t n_threads = std::min(static_cast<std::size_t>(args.jobs),
                                         std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  std::ostringstream csv;
  csv << kResultsHeader << '\n';
  for (const std::string& row : rows) csv << row << '\n';
  if (args.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(args.out, csv.str());
  }
  return kExitOk;
}

// --------------------------------------------------------------- report --

struct ReportArgs {
  std::string results;
  std::string out_dir = ".";
};

struct ResultRow {
  int weeks = 0;
  std::string t, s;  // textual, so grouping is exact
  double t_value = 0.0, s_value = 0.0;
  int seed = 0;
  double benchmark_hours = 0.0;
  double saved_hours = 0.0;
  double saved_percent = 0.0;
};

std::vector<ResultRow> parse_results(const std::string& text) {
  std::vector<ResultRow> rows;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kResultsHeader) {
        throw DataError("results: unexpected header");
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw DataError("results: line " + std::to_string(line_no) +
                      " has " + std::to_string(fields.size()) +
                      " fields, expected 9");
    }
    try {
      ResultRow row;
      row.weeks = std::stoi(fields[0]);
      row.t = fields[1];
      row.s = fields[2];
      row.t_value = std::stod(fields[1]);
      row.s_value = std::stod(fields[2]);
      row.seed = std::stoi(fields[3]);
      row.benchmark_hours = std::stod(fields[4]);
      row.saved_hours = std::stod(fields[5]);
      row.saved_percent = std::stod(fields[6]);
      rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw DataError("results: line " + std::to_string(line_no) +
                      " is not numeric");
    }
  }
  return rows;
}

struct CellStats {
  std::vector<double> hours, percent;

  double mean_hours() const {
    double sum = 0.0;
    for (double v : hours) sum += v;
    return hours.empty() ? 0.0 : sum / hours.size();
  }
  double mean_percent() const {
    double sum = 0.0;
    for (double v : percent) sum += v;
    return percent.empty() ? 0.0 : sum / percent.size();
  }
  double stddev_percent() const {
    if (percent.size() < 2) return 0.0;
    const double m = mean_percent();
    double sum = 0.0;
    for (double v : percent) sum += (v - m) * (v - m);
    return std::sqrt(sum / (percent.size() - 1));
  }
};

int cmd_report(const ReportArgs& args) {
  const std::vector<ResultRow> rows = parse_results(read_file(args.results));
  if (rows.empty()) {
    std::cerr << "report: no result rows in '" << args.results << "'\n";
    return kExitData;
  }

  // Axis values keep their textual form; ordering is numeric.
  std::map<double, std::string> t_axis, s_axis;
  for (const ResultRow& r : rows) {
    t_axis.emplace(r.t_value, r.t);
    s_axis.emplace(r.s_value, r.s);
  }

  std::set<int> weeks_present;
  for (const ResultRow& r : rows) weeks_present.insert(r.weeks);
  std::set<int> seeds_present;
  for (const ResultRow& r : rows) seeds_present.insert(r.seed);

  std::map<std::tuple<int, std::string, std::string>, CellStats> cells;
  for (const ResultRow& r : rows) {
    CellStats& cell = cells[{r.weeks, r.t, r.s}];
    cell.hours.push_back(r.saved_hours);
    cell.percent.push_back(r.saved_percent);
  }

  std::ostringstream summary;
  for (int w : weeks_present) {
    summary << "Observation window: " << w << (w == 1 ? " week" : " weeks")
            << " (mean turnaround saving over " << seeds_present.size()
            << (seeds_present.size() == 1 ? " seed" : " seeds")
            << ", cells are hours / percent)\n";
    summary << "        ";
    for (const auto& [sv, st] : s_axis) summary << "  S=" << st << "       ";
    summary << '\n';
    for (const auto& [tv, tt] : t_axis) {
      summary << "  T=" << tt;
      for (const auto& [sv, st] : s_axis) {
        const auto it = cells.find({w, tt, st});
        if (it == cells.end()) {
          summary << "  " << "     --      ";
          continue;
        }
        summary << "  " << fmt(it->second.mean_hours(), 2) << " / "
                << fmt(it->second.mean_percent(), 2) << "%";
      }
      summary << '\n';
    }
    if (seeds_present.size() > 1) {
      summary << "  (seed stddev of percent)\n";
      for (const auto& [tv, tt] : t_axis) {
        summary << "  T=" << tt;
        for (const auto& [sv, st] : s_axis) {
          const auto it = cells.find({w, tt, st});
          summary << "  "
                  << (it == cells.end()
                          ? std::string("     --      ")
                          : fmt(it->second.stddev_percent(), 2));
        }
        summary << '\n';
      }
    }
    summary << '\n';
  }
  write_file(args.out_dir + "/summary.txt", summary.str());

  // One series file per (T, S): the saving per window setting, for plotting.
  for (const auto& [tv, tt] : t_axis) {
    for (const auto& [sv, st] : s_axis) {
      std::ostringstream series;
      series << "window_weeks,mean_saved_hours,mean_saved_percent,"
                "stddev_saved_percent,seeds\n";
      bool any = false;
      for (int w : weeks_present) {
        const auto it = cells.find({w, tt, st});
        if (it == cells.end()) continue;
        any = true;
        series << w << ',' << fmt(it->second.mean_hours(), 6) << ','
               << fmt(it->second.mean_percent(), 6) << ','
               << fmt(it->second.stddev_percent(), 6) << ','
               << it->second.percent.size() << '\n';
      }
      if (!any) continue;
      write_file(args.out_dir + "/series_t" + tt + "_s" + st + ".csv",
                 series.str());
    }
  }
  std::cout << summary.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinative schedule optimization for tanker terminals"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic schedule and topology");
  synth->add_option("-o,--out", synth_args.out, "Schedule CSV to write")
      ->required();
  synth->add_option("--topology", synth_args.topology, "Topology CSV to write")
      ->required();
  synth->add_option("--seed", synth_args.seed, "Random seed");
  synth->add_option("--vessels", synth_args.config.n_vessels,
                    "Vessel cap (arrivals are Poisson-truncated)");
  synth->add_option("--berths", synth_args.config.n_berths, "Berth count");
  synth->add_option("--anchorages", synth_args.config.n_anchorages,
                    "Anchorage count");
  synth->add_option("--days", synth_args.config.horizon_days,
                    "Arrival horizon in days");
  synth->add_option("--rate", synth_args.config.arrival_rate,
                    "Arrivals per day");
  synth->add_option("--fixed-fraction", synth_args.config.fixed_fraction_hint,
                    "Probability a vessel's flags are fixed");

  OptimizeArgs opt_args;
  CLI::App* optimize = app.add_subcommand(
      "optimize", "Run the two-step heuristic over a schedule");
  optimize->add_option("--input", opt_args.input, "Schedule CSV")->required();
  optimize->add_option("--topology", opt_args.topology, "Topology CSV")
      ->required();
  CLI::Option* t_opt =
      optimize->add_option("--t", opt_args.t, "Temporal flexibility in [0,1]");
  CLI::Option* s_opt =
      optimize->add_option("--s", opt_args.s, "Spatial flexibility in [0,1]");
  optimize->add_option("--tau", opt_args.tau, "Buffer between stays, hours");
  optimize->add_option("--seed", opt_args.seed, "Flag sampling seed");
  optimize->add_option("-o,--out", opt_args.out,
                       "Optimized schedule CSV to write");
  optimize->add_option("--report", opt_args.report_path,
                       "Report JSON to write (default: stdout)");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Grid sweep over (window, T, S, seed)");
  sweep->add_option("--input", sweep_args.input,
                    "Schedule CSV (default: synthetic per seed)");
  sweep->add_option("--topology", sweep_args.topology,
                    "Topology CSV for --input");
  sweep->add_option("--t", sweep_args.t_list, "Comma-separated T values");
  sweep->add_option("--s", sweep_args.s_list, "Comma-separated S values");
  sweep->add_option("--weeks", sweep_args.weeks_list,
                    "Comma-separated window lengths (1,2,3)");
  sweep->add_option("--seeds", sweep_args.seeds, "Seeds 1..N per cell");
  sweep->add_option("--tau", sweep_args.tau, "Buffer between stays, hours");
  sweep->add_option("--jobs", sweep_args.jobs, "Worker threads");
  sweep->add_option("-o,--out", sweep_args.out,
                    "Results CSV to write (default: stdout)");

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand(
      "report", "Render sweep results as tables and series files");
  report->add_option("--results", report_args.results, "Sweep results CSV")
      ->required();
  report->add_option("--out-dir", report_args.out_dir,
                     "Directory for summary.txt and series files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  opt_args.has_t = t_opt->count() > 0;
  opt_args.has_s = s_opt->count() > 0;
  if (!sweep_args.input.empty() && sweep_args.topology.empty()) {
    std::cerr << "sweep: --input requires --topology\n";
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_args);
    if (optimize->parsed()) return cmd_optimize(opt_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (report->parsed()) return cmd_report(report_args);
  } catch (const cosched::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

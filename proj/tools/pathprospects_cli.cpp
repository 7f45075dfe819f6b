#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathprospects/coordination.hpp"
#include "pathprospects/harness.hpp"

namespace fs = std::filesystem;
using namespace pp;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kInvariant = 3 };

std::pair<int, int> parse_size(const std::string& s) {
  int w = 0;
  int h = 0;
  char x = 0;
  std::istringstream in(s);
  if (!(in >> w >> x >> h) || x != 'x' || !in.eof()) throw ParseError("size must be WxH, got '" + s + "'");
  return {w, h};
}

std::vector<double> parse_ranges(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(parse_number(item));
  if (out.empty()) throw ParseError("empty range list");
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string fmt(double v) { return std::isnan(v) ? std::string("-") : format_number(v); }

int cmd_gen_map(const std::string& kind, const std::string& size, std::uint64_t seed, double density,
                const std::string& out) {
  const auto [w, h] = parse_size(size);
  MapParams params;
  params.density = density;
  save_map_file(generate_map(parse_map_kind(kind), w, h, seed, params), out);
  return kOk;
}

int cmd_gen_problems(const std::string& map_path, const std::string& roster, int count, std::uint64_t seed,
                     double comm_range, const std::string& dir) {
  auto map = std::make_shared<const GridMap>(load_map_file(map_path));
  const auto entries = parse_roster(roster);
  fs::create_directories(dir);
  const std::string rel = fs::relative(fs::absolute(map_path), fs::absolute(dir)).generic_string();
  for (int k = 0; k < count; ++k) {
    Scenario sc = generate_problem(map, entries, seed + static_cast<std::uint64_t>(k));
    sc.comm_range = comm_range;
    char name[32];
    std::snprintf(name, sizeof name, "problem_%05d.json", k);
    write_file((fs::path(dir) / name).string(), scenario_to_json(sc, rel, k));
  }
  std::cout << "wrote " << count << " problems to " << dir << "\n";
  return kOk;
}

int cmd_run(const std::string& path, const std::string& heuristic, double range, const std::string& dump,
            bool verbose) {
  Scenario sc = load_scenario_file(path);
  if (!heuristic.empty()) sc.heuristic.kind = parse_heuristic(heuristic);
  if (range > 0) sc.comm_range = range;
  RunOptions opts;
  if (verbose) opts.event_log = &std::cerr;
  const RunRecord rec = run_scenario(sc, opts);
  const MetricsRow row = finalize_row(rec, Ideals{rec.ideal_flowtime, rec.ideal_makespan});

  std::cout << "heuristic " << to_string(sc.heuristic.kind) << "\n"
            << "success " << (rec.success ? 1 : 0) << "\n"
            << "ticks " << rec.end_tick << " (t_max " << rec.t_max << ")\n"
            << "flowtime " << fmt(rec.flowtime) << " ideal " << fmt(rec.ideal_flowtime) << "\n"
            << "makespan " << fmt(rec.makespan) << " ideal " << fmt(rec.ideal_makespan) << "\n";
  if (row.success)
    std::cout << "pct_flowtime_increase " << format_number(*row.pct_flowtime_increase) << "\n"
              << "pct_makespan_increase " << format_number(*row.pct_makespan_increase) << "\n";
  int replans = 0;
  for (int r : rec.replan_counts) replans += r;
  std::cout << "replans " << replans << "\n"
            << "negotiations " << rec.negotiation.negotiations << " max_rounds " << rec.negotiation.max_plan_rounds
            << "\n"
            << "conflicts " << rec.conflict_violations << "\n";

  if (!dump.empty()) {
    std::string text;
    for (std::size_t n = 0; n < rec.trajectories.size(); ++n) {
      Plan p;
      p.start_tick = 0;
      p.rho = rec.rhos[n];
      p.anchors = rec.trajectories[n];
      text += format_plan_record(static_cast<int>(n), p) + "\n";
    }
    write_file(dump, text);
  }
  if (rec.conflict_violations > 0 || rec.negotiation.cyclic_orders > 0 || rec.negotiation.inconsistent_orders > 0)
    return kInvariant;
  return kOk;
}

int cmd_bench(const std::string& dir, const std::string& heuristics, const std::string& ranges,
              const std::string& out, const std::string& summary, bool full, int jobs) {
  std::vector<BenchProblem> problems;
  BenchConfig cfg;
  cfg.jobs = jobs;
  cfg.heuristics = parse_heuristic_list(heuristics);
  if (dir.empty()) {
    const SuiteSpec spec = full ? full_suite() : desk_suite();
    problems = build_suite(spec);
    cfg.ranges = ranges.empty() ? spec.ranges : parse_ranges(ranges);
  } else {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ParseError("no scenario files in " + dir);
    for (std::size_t i = 0; i < files.size(); ++i) {
      const int id = scenario_file_id(files[i]);
      problems.push_back({id >= 0 ? id : static_cast<int>(i), load_scenario_file(files[i])});
    }
    cfg.ranges = ranges.empty() ? std::vector<double>{problems.front().scenario.comm_range} : parse_ranges(ranges);
  }
  const auto rows = run_bench(problems, cfg);
  write_file(out, emit_csv(rows));
  const auto groups = aggregate(rows);
  write_file(summary.empty() ? out + ".summary.json" : summary, summary_json(groups));
  std::cout << "heuristic range runs success% pct_flowtime(+-ci) pct_makespan(+-ci)\n";
  for (const auto& g : groups)
    std::cout << g.heuristic << ' ' << format_number(*g.comm_range) << ' ' << g.runs << ' '
              << format_number(g.success_rate) << ' ' << fmt(g.mean_pct_flowtime) << "(+-" << fmt(g.ci_pct_flowtime)
              << ") " << fmt(g.mean_pct_makespan) << "(+-" << fmt(g.ci_pct_makespan) << ")\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prioritized multi-robot path planning with path-prospect priorities"};
  app.require_subcommand(1);

  std::string kind, size = "30x30", out;
  std::uint64_t seed = 1;
  double density = 0.10;
  auto* gen_map = app.add_subcommand("gen-map", "Generate a synthetic grid map");
  gen_map->add_option("kind", kind, "maze | clutter | crossing | corridor | tunnel")->required();
  gen_map->add_option("--size", size, "WxH");
  gen_map->add_option("--seed", seed);
  gen_map->add_option("--density", density, "Clutter obstacle fraction");
  gen_map->add_option("-o,--output", out)->required();

  std::string map_path, roster = "1x2,2x2,3x2", dir;
  int count = 100;
  double comm_range = 20.0;
  auto* gen_problems = app.add_subcommand("gen-problems", "Sample random start/goal assignments");
  gen_problems->add_option("--map", map_path)->required();
  gen_problems->add_option("--roster", roster, "RHOxCOUNT,...");
  gen_problems->add_option("--count", count);
  gen_problems->add_option("--seed", seed);
  gen_problems->add_option("--comm-range", comm_range);
  gen_problems->add_option("-o,--output", dir)->required();

  std::string scenario, heuristic, dump;
  double range = 0;
  bool verbose = false;
  auto* run = app.add_subcommand("run", "Simulate one scenario");
  run->add_option("--scenario", scenario)->required();
  run->add_option("--heuristic", heuristic, "NS | CS | LF | FL | PP-R | PP-LF | R");
  run->add_option("--comm-range", range);
  run->add_option("--dump-trajectories", dump);
  run->add_flag("-v,--verbose", verbose, "Print negotiation events to stderr");

  std::string problems_dir, heuristics = "NS,CS,LF,FL,PP-R,PP-LF,R", ranges, summary, csv = "results.csv";
  bool full = false;
  int jobs = 0;
  auto* bench = app.add_subcommand("bench", "Sweep heuristics and ranges over a problem set");
  bench->add_option("--problems", problems_dir, "Directory of scenario files (default: generated suite)");
  bench->add_option("--heuristics", heuristics);
  bench->add_option("--ranges", ranges);
  bench->add_option("-o,--output", csv);
  bench->add_option("--summary", summary);
  bench->add_option("--jobs", jobs);
  bench->add_flag("--full", full, "Generated suite at 75x75 with 10 robots and 500 problems per map (hours)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_map) return cmd_gen_map(kind, size, seed, density, out);
    if (*gen_problems) return cmd_gen_problems(map_path, roster, count, seed, comm_range, dir);
    if (*run) return cmd_run(scenario, heuristic, range, dump, verbose);
    if (*bench) return cmd_bench(problems_dir, heuristics, ranges, csv, summary, full, jobs);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

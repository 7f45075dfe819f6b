#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathprospects/coordination.hpp"

namespace pp {

struct RosterEntry {
  int rho = 1;
  int count = 1;
};

/// "1x2,2x2,3x2": footprint x count, comma separated.
std::vector<RosterEntry> parse_roster(std::string_view spec);
std::string format_roster(const std::vector<RosterEntry>& roster);

/// Rejection-samples disjoint starts, then disjoint goals, each connected to its start.
/// Deterministic per (map, roster, seed). Throws InfeasibleError when a footprint does
/// not fit or `attempts` samples per robot run out.
Scenario generate_problem(std::shared_ptr<const GridMap> map, const std::vector<RosterEntry>& roster,
                          std::uint64_t seed, int attempts = 20000);

struct Ideals {
  double flowtime = 0.0;
  double makespan = 0.0;
};

Ideals ideal_metrics(const Scenario& sc);

struct MetricsRow {
  int problem_id = 0;
  std::string heuristic;
  double comm_range = 0.0;
  bool success = false;
  std::optional<double> flowtime;
  std::optional<double> makespan;
  std::optional<double> pct_flowtime_increase;
  std::optional<double> pct_makespan_increase;
  double diversity_H = 0.0;
  double diversity_S = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

/// Outcome fields only; the caller fills id, heuristic, range and diversity.
MetricsRow finalize_row(const RunRecord& record, const Ideals& ideals);
MetricsRow finalize_row(const std::vector<std::optional<int>>& finish_ticks, const Ideals& ideals);

/// Shannon entropy (bits) of the partition of robots by prospect value.
double shannon_diversity(const std::vector<double>& prospects);
/// Integral over linkage height of the Shannon entropy of single-linkage clusters on
/// log2(prospects).
double hierarchic_diversity(const std::vector<double>& prospects);

/// Path prospects of every robot at tick 0, with the team's longest true distance as bound.
std::vector<double> initial_prospects(const Scenario& sc);

struct GroupSummary {
  std::string heuristic;
  std::optional<double> comm_range;  // empty when ranges are pooled
  int runs = 0;
  int successes = 0;
  double success_rate = 0.0;  // percent
  double mean_pct_flowtime = 0.0;
  double ci_pct_flowtime = 0.0;  // half-width, 1.96 * sample sd / sqrt(n)
  double mean_pct_makespan = 0.0;
  double ci_pct_makespan = 0.0;
};

/// Groups by (heuristic, comm_range), or by heuristic alone with `pool_ranges`.
/// Means are NaN with no successful run; CIs are NaN with fewer than two.
std::vector<GroupSummary> aggregate(const std::vector<MetricsRow>& rows, bool pool_ranges = false);
std::string summary_json(const std::vector<GroupSummary>& groups);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);
double parse_number(std::string_view text);

std::string csv_header();
std::string emit_csv(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> parse_csv(std::string_view text);

/// JSON scenario description. The map is either `map_path` (relative to the file) or a
/// `map` generator spec {kind, width, height, seed}.
Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario(std::string_view json_text, const std::string& base_dir);
std::string scenario_to_json(const Scenario& sc, const std::string& map_path, int problem_id = -1);

/// Problem id stored in a scenario file, or -1.
int scenario_file_id(const std::string& path);

struct BenchProblem {
  int id = 0;
  Scenario scenario;
};

struct BenchConfig {
  std::vector<Heuristic> heuristics;
  std::vector<double> ranges;
  int heuristic_range = 30;  // NS/CS obstacle radius
  int jobs = 0;              // 0 = hardware concurrency
};

/// Every (problem, heuristic, range) run, ordered by problem id, heuristic, range
/// regardless of completion order.
std::vector<MetricsRow> run_bench(const std::vector<BenchProblem>& problems, const BenchConfig& config);

struct SuiteSpec {
  std::vector<MapKind> maps;
  std::vector<MapParams> map_params;
  int width = 30;
  int height = 30;
  std::vector<RosterEntry> roster;
  int problems_per_map = 100;
  std::vector<double> ranges;
  std::uint64_t seed = 1;
};

/// 30x30 clutter, two robots of each size 1..3, ranges {12, 20}, 100 problems.
SuiteSpec desk_suite();
/// Six 75x75 maps, two robots of each size 1..5, ranges {30, 40, 50}, 500 problems per map.
SuiteSpec full_suite();
std::vector<BenchProblem> build_suite(const SuiteSpec& spec);

}  // namespace pp

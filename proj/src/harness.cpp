#include "pathprospects/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pathprospects/prospects.hpp"

namespace pp {

namespace fs = std::filesystem;
using nlohmann::json;

// --- problems --------------------------------------------------------------

std::vector<RosterEntry> parse_roster(std::string_view spec) {
  std::vector<RosterEntry> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    const std::string_view item = spec.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t x = item.find('x');
    if (x == std::string_view::npos) throw ParseError("roster item '" + std::string(item) + "' is not RHOxCOUNT");
    RosterEntry e;
    const auto r1 = std::from_chars(item.data(), item.data() + x, e.rho);
    const auto r2 = std::from_chars(item.data() + x + 1, item.data() + item.size(), e.count);
    if (r1.ec != std::errc{} || r1.ptr != item.data() + x || r2.ec != std::errc{} ||
        r2.ptr != item.data() + item.size())
      throw ParseError("roster item '" + std::string(item) + "' is not RHOxCOUNT");
    if (e.rho < 1 || e.count < 1) throw ParseError("roster sizes and counts must be at least 1");
    out.push_back(e);
  }
  if (out.empty()) throw ParseError("empty roster");
  return out;
}

std::string format_roster(const std::vector<RosterEntry>& roster) {
  std::string out;
  for (const auto& e : roster) {
    if (!out.empty()) out += ',';
    out += std::to_string(e.rho) + "x" + std::to_string(e.count);
  }
  return out;
}

Scenario generate_problem(std::shared_ptr<const GridMap> map, const std::vector<RosterEntry>& roster,
                          std::uint64_t seed, int attempts) {
  if (!map) throw std::invalid_argument("generate_problem needs a map");
  std::vector<int> rhos;
  for (const auto& e : roster) {
    if (e.rho < 1 || e.count < 1) throw InfeasibleError("roster sizes and counts must be at least 1");
    for (int i = 0; i < e.count; ++i) rhos.push_back(e.rho);
  }
  if (rhos.empty()) throw InfeasibleError("empty roster");

  std::map<int, ConfigSpace> spaces;
  std::map<int, std::vector<Anchor>> valid;
  for (int rho : rhos) {
    if (spaces.count(rho)) continue;
    if (rho > map->width() || rho > map->height())
      throw InfeasibleError("footprint " + std::to_string(rho) + " does not fit the map");
    const ConfigSpace& cs = spaces.emplace(rho, build_config_space(*map, Footprint{rho})).first->second;
    auto& list = valid[rho];
    for (int i = 0; i < cs.size(); ++i)
      if (cs.valid_mask()[static_cast<std::size_t>(i)]) list.push_back(cs.anchor_at(i));
    if (list.size() < 2) throw InfeasibleError("no room for footprint " + std::to_string(rho));
  }

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x70b1e3u};
  std::mt19937_64 rng(seq);
  auto pick = [&](const std::vector<Anchor>& list) {
    return list[std::uniform_int_distribution<std::size_t>(0, list.size() - 1)(rng)];
  };

  Scenario sc;
  sc.map = map;
  sc.seed = seed;
  sc.robots.resize(rhos.size());
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    RobotSpec& r = sc.robots[i];
    r.rho = rhos[i];
    bool placed = false;
    for (int k = 0; k < attempts && !placed; ++k) {
      const Anchor a = pick(valid[r.rho]);
      placed = true;
      for (std::size_t j = 0; j < i && placed; ++j)
        placed = !squares_overlap(a, r.rho, sc.robots[j].start, sc.robots[j].rho);
      if (placed) r.start = a;
    }
    if (!placed) throw InfeasibleError("could not place start of robot " + std::to_string(i));
  }
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    RobotSpec& r = sc.robots[i];
    const ConfigSpace& cs = spaces.at(r.rho);
    const std::vector<int> d = bfs_distances(cs, r.start);
    std::vector<Anchor> reachable;
    for (const Anchor a : valid[r.rho])
      if (d[static_cast<std::size_t>(cs.index(a))] != DistanceField::kUnreachable && !(a == r.start))
        reachable.push_back(a);
    bool placed = false;
    for (int k = 0; k < attempts && !placed && !reachable.empty(); ++k) {
      const Anchor a = pick(reachable);
      placed = true;
      for (std::size_t j = 0; j < i && placed; ++j)
        placed = !squares_overlap(a, r.rho, sc.robots[j].goal, sc.robots[j].rho);
      if (placed) r.goal = a;
    }
    if (!placed) throw InfeasibleError("could not place goal of robot " + std::to_string(i));
  }
  return sc;
}

Ideals ideal_metrics(const Scenario& sc) {
  if (!sc.map || sc.robots.empty()) throw std::invalid_argument("ideal metrics need a map and robots");
  std::map<int, ConfigSpace> spaces;
  double sum = 0;
  double worst = 0;
  for (const auto& r : sc.robots) {
    auto it = spaces.find(r.rho);
    if (it == spaces.end()) it = spaces.emplace(r.rho, build_config_space(*sc.map, Footprint{r.rho})).first;
    const DistanceField dist = true_distance_field(it->second, r.goal);
    const int d = dist.at(r.start);
    if (d == DistanceField::kUnreachable) throw InfeasibleError("robot cannot reach its goal");
    sum += d;
    worst = std::max(worst, static_cast<double>(d));
  }
  return {sum / static_cast<double>(sc.robots.size()), worst};
}

// --- metrics ---------------------------------------------------------------

namespace {

double pct_increase(double actual, double ideal) {
  if (ideal == 0.0) return actual == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return 100.0 * (actual - ideal) / ideal;
}

double entropy_of_counts(const std::vector<int>& counts, int total) {
  double h = 0.0;
  for (int c : counts) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h + 0.0;  // normalises -0
}

}  // namespace

MetricsRow finalize_row(const std::vector<std::optional<int>>& finish_ticks, const Ideals& ideals) {
  MetricsRow row;
  row.success = !finish_ticks.empty() &&
                std::all_of(finish_ticks.begin(), finish_ticks.end(), [](const auto& f) { return f.has_value(); });
  if (!row.success) return row;
  double sum = 0;
  double worst = 0;
  for (const auto& f : finish_ticks) {
    sum += *f;
    worst = std::max(worst, static_cast<double>(*f));
  }
  row.flowtime = sum / static_cast<double>(finish_ticks.size());
  row.makespan = worst;
  row.pct_flowtime_increase = pct_increase(*row.flowtime, ideals.flowtime);
  row.pct_makespan_increase = pct_increase(*row.makespan, ideals.makespan);
  return row;
}

MetricsRow finalize_row(const RunRecord& record, const Ideals& ideals) {
  if (!record.success) {
    MetricsRow row;
    row.success = false;
    return row;
  }
  return finalize_row(record.finish_ticks, ideals);
}

double shannon_diversity(const std::vector<double>& prospects) {
  if (prospects.empty()) throw std::invalid_argument("diversity of an empty team");
  std::map<double, int> classes;
  for (double p : prospects) ++classes[p];
  std::vector<int> counts;
  for (const auto& [value, c] : classes) counts.push_back(c);
  return entropy_of_counts(counts, static_cast<int>(prospects.size()));
}

double hierarchic_diversity(const std::vector<double>& prospects) {
  if (prospects.empty()) throw std::invalid_argument("diversity of an empty team");
  std::map<double, int> by_kappa;
  for (double p : prospects) ++by_kappa[std::log2(p)];
  std::vector<double> values;
  std::vector<int> counts;
  for (const auto& [k, c] : by_kappa) {
    values.push_back(k);
    counts.push_back(c);
  }
  // In one dimension single linkage merges neighbours in sorted order; at height h the
  // clusters are the runs separated by gaps larger than h.
  std::vector<double> gaps;
  for (std::size_t i = 1; i < values.size(); ++i) gaps.push_back(values[i] - values[i - 1]);
  std::vector<double> heights = gaps;
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());

  const int total = static_cast<int>(prospects.size());
  auto entropy_at = [&](double h) {
    std::vector<int> clusters{counts[0]};
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (gaps[i - 1] <= h) clusters.back() += counts[i];
      else clusters.push_back(counts[i]);
    }
    return entropy_of_counts(clusters, total);
  };
  double s = 0.0;
  double level = 0.0;
  for (double next : heights) {
    s += (next - level) * entropy_at(level);
    level = next;
  }
  return s + 0.0;
}

std::vector<double> initial_prospects(const Scenario& sc) {
  std::map<int, ConfigSpace> spaces;
  std::vector<DistanceField> fields;
  int bound = 0;
  for (const auto& r : sc.robots) {
    auto it = spaces.find(r.rho);
    if (it == spaces.end()) it = spaces.emplace(r.rho, build_config_space(*sc.map, Footprint{r.rho})).first;
    fields.push_back(true_distance_field(it->second, r.goal));
    bound = std::max(bound, fields.back().at(r.start));
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < sc.robots.size(); ++i) {
    const auto& r = sc.robots[i];
    const ConfigSpace& cs = spaces.at(r.rho);
    out.push_back(path_prospects(cs, forwards_vertices(cs, r.start, 0, r.goal, fields[i], bound)).prospects);
  }
  return out;
}

namespace {

int heuristic_rank(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kAllHeuristics); ++i)
    if (to_string(kAllHeuristics[i]) == name) return static_cast<int>(i);
  return static_cast<int>(std::size(kAllHeuristics));
}

void mean_ci(const std::vector<double>& xs, double& mean, double& ci) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (xs.empty()) {
    mean = ci = nan;
    return;
  }
  double sum = 0;
  for (double x : xs) sum += x;
  mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) {
    ci = nan;
    return;
  }
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  ci = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace

std::vector<GroupSummary> aggregate(const std::vector<MetricsRow>& rows, bool pool_ranges) {
  if (rows.empty()) throw std::invalid_argument("nothing to aggregate");
  using Key = std::tuple<int, std::string, double>;
  std::map<Key, std::vector<const MetricsRow*>> groups;
  for (const auto& r : rows)
    groups[{heuristic_rank(r.heuristic), r.heuristic, pool_ranges ? 0.0 : r.comm_range}].push_back(&r);

  std::vector<GroupSummary> out;
  for (const auto& [key, members] : groups) {
    GroupSummary g;
    g.heuristic = std::get<1>(key);
    if (!pool_ranges) g.comm_range = std::get<2>(key);
    g.runs = static_cast<int>(members.size());
    std::vector<double> flow;
    std::vector<double> make;
    for (const MetricsRow* m : members) {
      if (!m->success) continue;
      ++g.successes;
      flow.push_back(m->pct_flowtime_increase.value());
      make.push_back(m->pct_makespan_increase.value());
    }
    g.success_rate = 100.0 * g.successes / g.runs;
    mean_ci(flow, g.mean_pct_flowtime, g.ci_pct_flowtime);
    mean_ci(make, g.mean_pct_makespan, g.ci_pct_makespan);
    out.push_back(g);
  }
  return out;
}

std::string summary_json(const std::vector<GroupSummary>& groups) {
  json arr = json::array();
  for (const auto& g : groups) {
    json j;
    j["heuristic"] = g.heuristic;
    j["comm_range"] = g.comm_range ? json(*g.comm_range) : json(nullptr);
    j["runs"] = g.runs;
    j["successes"] = g.successes;
    j["success_rate"] = g.success_rate;
    j["mean_pct_flowtime_increase"] = g.mean_pct_flowtime;
    j["ci95_pct_flowtime_increase"] = g.ci_pct_flowtime;
    j["mean_pct_makespan_increase"] = g.mean_pct_makespan;
    j["ci95_pct_makespan_increase"] = g.ci_pct_makespan;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

// --- CSV -------------------------------------------------------------------

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError("malformed number '" + std::string(text) + "'");
  return v;
}

std::string csv_header() {
  return "problem_id,heuristic,comm_range,success,flowtime,makespan,pct_flowtime_increase,"
         "pct_makespan_increase,diversity_H,diversity_S";
}

std::string emit_csv(const std::vector<MetricsRow>& rows) {
  std::string out = csv_header() + "\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : rows) {
    out += std::to_string(r.problem_id) + ',' + r.heuristic + ',' + format_number(r.comm_range) + ',' +
           (r.success ? "1" : "0") + ',' + opt(r.flowtime) + ',' + opt(r.makespan) + ',' +
           opt(r.pct_flowtime_increase) + ',' + opt(r.pct_makespan_increase) + ',' + format_number(r.diversity_H) +
           ',' + format_number(r.diversity_S) + '\n';
  }
  return out;
}

std::vector<MetricsRow> parse_csv(std::string_view text) {
  std::vector<MetricsRow> rows;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line_no == 1) {
      if (line != csv_header()) throw ParseError("unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t p = 0;
    for (;;) {
      const std::size_t c = line.find(',', p);
      f.push_back(line.substr(p, c == std::string_view::npos ? std::string_view::npos : c - p));
      if (c == std::string_view::npos) break;
      p = c + 1;
    }
    if (f.size() != 10) throw ParseError("CSV line " + std::to_string(line_no) + " has " + std::to_string(f.size()) + " fields");
    auto opt = [](std::string_view s) { return s.empty() ? std::optional<double>{} : std::optional<double>{parse_number(s)}; };
    MetricsRow r;
    const auto id = std::from_chars(f[0].data(), f[0].data() + f[0].size(), r.problem_id);
    if (id.ec != std::errc{} || id.ptr != f[0].data() + f[0].size()) throw ParseError("malformed problem id");
    r.heuristic = std::string(f[1]);
    r.comm_range = parse_number(f[2]);
    if (f[3] != "0" && f[3] != "1") throw ParseError("success must be 0 or 1");
    r.success = f[3] == "1";
    r.flowtime = opt(f[4]);
    r.makespan = opt(f[5]);
    r.pct_flowtime_increase = opt(f[6]);
    r.pct_makespan_increase = opt(f[7]);
    r.diversity_H = parse_number(f[8]);
    r.diversity_S = parse_number(f[9]);
    rows.push_back(std::move(r));
  }
  if (line_no == 0) throw ParseError("empty CSV");
  return rows;
}

// --- scenario files ---------------------------------------------------------

namespace {

Anchor anchor_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw ParseError(std::string(what) + " must be [x, y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  try {
    Scenario sc;
    if (j.contains("map_path")) {
      fs::path p = j.at("map_path").get<std::string>();
      if (p.is_relative()) p = fs::path(base_dir) / p;
      sc.map = std::make_shared<const GridMap>(load_map_file(p.string()));
    } else if (j.contains("map")) {
      const json& m = j.at("map");
      MapParams params;
      if (m.contains("density")) params.density = m.at("density").get<double>();
      sc.map = std::make_shared<const GridMap>(generate_map(parse_map_kind(m.at("kind").get<std::string>()),
                                                            m.at("width").get<int>(), m.at("height").get<int>(),
                                                            m.value("seed", std::uint64_t{0}), params));
    } else {
      throw ParseError("scenario needs map_path or map");
    }
    for (const json& r : j.at("robots")) {
      RobotSpec spec;
      spec.rho = r.value("rho", 1);
      spec.start = anchor_from(r.at("start"), "start");
      spec.goal = anchor_from(r.at("goal"), "goal");
      sc.robots.push_back(spec);
    }
    sc.comm_range = j.value("comm_range", 20.0);
    sc.heuristic.kind = parse_heuristic(j.value("heuristic", std::string("PP-LF")));
    sc.heuristic.range = j.value("heuristic_range", 30);
    sc.seed = j.value("seed", std::uint64_t{0});
    sc.t_max = j.value("t_max", 0);
    sc.wait_ticks = j.value("wait_ticks", 5);
    if (j.contains("fixed_ranks")) sc.fixed_ranks = j.at("fixed_ranks").get<std::vector<int>>();
    return sc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad scenario field: ") + e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  return parse_scenario(read_text(path), fs::path(path).parent_path().string());
}

int scenario_file_id(const std::string& path) {
  try {
    const json j = json::parse(read_text(path));
    return j.value("id", -1);
  } catch (const json::exception&) {
    throw ParseError("scenario " + path + " is not valid JSON");
  }
}

std::string scenario_to_json(const Scenario& sc, const std::string& map_path, int problem_id) {
  json j;
  if (problem_id >= 0) j["id"] = problem_id;
  j["map_path"] = map_path;
  json robots = json::array();
  for (const auto& r : sc.robots)
    robots.push_back({{"rho", r.rho}, {"start", {r.start.x, r.start.y}}, {"goal", {r.goal.x, r.goal.y}}});
  j["robots"] = robots;
  j["comm_range"] = sc.comm_range;
  j["heuristic"] = std::string(to_string(sc.heuristic.kind));
  j["heuristic_range"] = sc.heuristic.range;
  j["seed"] = sc.seed;
  j["t_max"] = sc.t_max;
  if (sc.wait_ticks != 5) j["wait_ticks"] = sc.wait_ticks;
  if (!sc.fixed_ranks.empty()) j["fixed_ranks"] = sc.fixed_ranks;
  return j.dump(2) + "\n";
}

// --- bench -----------------------------------------------------------------

std::vector<MetricsRow> run_bench(const std::vector<BenchProblem>& problems, const BenchConfig& config) {
  if (config.heuristics.empty() || config.ranges.empty()) throw std::invalid_argument("bench needs heuristics and ranges");
  const std::size_t per_problem = config.heuristics.size() * config.ranges.size();
  const std::size_t total = problems.size() * per_problem;
  std::vector<MetricsRow> rows(total);
  std::vector<std::exception_ptr> errors(total);

  // Diversity depends on the assignment only, so it is shared across sweeps.
  std::vector<std::pair<double, double>> diversity(problems.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> next_div{0};

  auto worker = [&] {
    for (std::size_t p; (p = next_div++) < problems.size();) {
      try {
        const auto pr = initial_prospects(problems[p].scenario);
        diversity[p] = {shannon_diversity(pr), hierarchic_diversity(pr)};
      } catch (...) {
        errors[p * per_problem] = std::current_exception();
      }
    }
  };
  auto runner = [&] {
    for (std::size_t i; (i = next++) < total;) {
      const std::size_t p = i / per_problem;
      const std::size_t hi = (i % per_problem) / config.ranges.size();
      const std::size_t ri = i % config.ranges.size();
      try {
        Scenario sc = problems[p].scenario;
        sc.heuristic = {config.heuristics[hi], config.heuristic_range};
        sc.comm_range = config.ranges[ri];
        RunOptions opts;
        opts.keep_trajectories = false;
        const RunRecord rec = run_scenario(sc, opts);
        MetricsRow row = finalize_row(rec, Ideals{rec.ideal_flowtime, rec.ideal_makespan});
        row.problem_id = problems[p].id;
        row.heuristic = std::string(to_string(config.heuristics[hi]));
        row.comm_range = config.ranges[ri];
        row.diversity_H = diversity[p].first;
        row.diversity_S = diversity[p].second;
        rows[i] = std::move(row);
      } catch (...) {
        if (!errors[i]) errors[i] = std::current_exception();
      }
    }
  };

  int jobs = config.jobs > 0 ? config.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), std::max<std::size_t>(total, 1)));
  auto run_pool = [&](auto&& fn) {
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(fn);
    fn();
    for (auto& th : pool) th.join();
  };
  run_pool(worker);
  run_pool(runner);
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

SuiteSpec desk_suite() {
  SuiteSpec s;
  s.maps = {MapKind::Clutter};
  s.map_params = {MapParams{}};
  s.width = s.height = 30;
  s.roster = {{1, 2}, {2, 2}, {3, 2}};
  s.problems_per_map = 100;
  s.ranges = {12, 20};
  return s;
}

SuiteSpec full_suite() {
  SuiteSpec s;
  MapParams dense;
  dense.density = 0.2;
  s.maps = {MapKind::Maze, MapKind::Clutter, MapKind::Crossing, MapKind::Corridor, MapKind::Tunnel, MapKind::Clutter};
  s.map_params = {MapParams{}, MapParams{}, MapParams{}, MapParams{}, MapParams{}, dense};
  s.width = s.height = 75;
  s.roster = {{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}};
  s.problems_per_map = 500;
  s.ranges = {30, 40, 50};
  return s;
}

std::vector<BenchProblem> build_suite(const SuiteSpec& spec) {
  if (spec.maps.size() != spec.map_params.size()) throw std::invalid_argument("one parameter set per map required");
  std::vector<BenchProblem> out;
  int id = 0;
  for (std::size_t m = 0; m < spec.maps.size(); ++m) {
    auto map = std::make_shared<const GridMap>(
        generate_map(spec.maps[m], spec.width, spec.height, spec.seed + m, spec.map_params[m]));
    for (int k = 0; k < spec.problems_per_map; ++k) {
      const std::uint64_t seed = spec.seed * 1000003u + m * 100003u + static_cast<std::uint64_t>(k);
      out.push_back({id++, generate_problem(map, spec.roster, seed)});
    }
  }
  return out;
}

}  // namespace pp

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pathprospects/coordination.hpp"
#include "pathprospects/harness.hpp"
#include "test_support.hpp"

using namespace pp;

namespace {

std::shared_ptr<const GridMap> shared_map(const std::vector<std::string>& rows) {
  return std::make_shared<const GridMap>(oracle::map_from_rows(rows));
}

// Cell-level overlap of the swept unions of two executed trajectories.
bool swept_overlap(const std::vector<Anchor>& a, int rho_a, const std::vector<Anchor>& b, int rho_b, int t) {
  auto at = [](const std::vector<Anchor>& tr, int tick) { return tr[static_cast<std::size_t>(std::min<int>(tick, static_cast<int>(tr.size()) - 1))]; };
  const Anchor boxes_a[2] = {at(a, t), at(a, t + 1)};
  const Anchor boxes_b[2] = {at(b, t), at(b, t + 1)};
  for (Anchor p : boxes_a)
    for (Anchor q : boxes_b)
      if (p.x < q.x + rho_b && q.x < p.x + rho_a && p.y < q.y + rho_b && q.y < p.y + rho_a) return true;
  return false;
}

int independent_conflicts(const RunRecord& rec) {
  int bad = 0;
  int horizon = 0;
  for (const auto& tr : rec.trajectories) horizon = std::max(horizon, static_cast<int>(tr.size()));
  for (std::size_t i = 0; i < rec.trajectories.size(); ++i)
    for (std::size_t j = i + 1; j < rec.trajectories.size(); ++j)
      for (int t = 0; t < horizon; ++t)
        if (swept_overlap(rec.trajectories[i], rec.rhos[i], rec.trajectories[j], rec.rhos[j], t)) ++bad;
  return bad;
}

void check_lists(const Simulation& sim) {
  for (int n = 0; n < sim.robot_count(); ++n) {
    const RobotState& r = sim.robot(n);
    std::set<int> both = r.higher;
    both.insert(r.lower.begin(), r.lower.end());
    CHECK(both == r.neighbors);
    CHECK(both.size() == r.higher.size() + r.lower.size());
    for (int m : r.higher) CHECK(sim.robot(m).lower.count(n) == 1);
    for (int m : r.lower) CHECK(sim.robot(m).higher.count(n) == 1);
  }
}

Scenario crossing_lanes(double range) {
  Scenario sc;
  sc.map = shared_map({"....................", "....................", "...................."});
  sc.robots = {{1, {0, 0}, {19, 0}}, {1, {19, 2}, {0, 2}}};
  sc.comm_range = range;
  sc.fixed_ranks = {0, 1};
  return sc;
}

}  // namespace

TEST_CASE("scenario validation") {
  Scenario sc = crossing_lanes(5.0);
  CHECK_NOTHROW(validate_scenario(sc));
  CHECK(default_t_max(*sc.map) == 8 * (20 + 3));
  CHECK(effective_t_max(sc) == default_t_max(*sc.map));
  sc.t_max = 50;
  CHECK(effective_t_max(sc) == 50);

  SUBCASE("overlapping starts") {
    sc.robots[1].start = {0, 0};
    CHECK_THROWS_AS(validate_scenario(sc), InfeasibleError);
  }
  SUBCASE("overlapping goals") {
    sc.robots[1].goal = {19, 0};
    CHECK_THROWS_AS(validate_scenario(sc), InfeasibleError);
  }
  SUBCASE("range shorter than one tick of approach") {
    sc.comm_range = 2.0;
    CHECK(minimum_safe_range(sc) > 2.0);
    CHECK_THROWS_AS(validate_scenario(sc), InfeasibleError);
  }
  SUBCASE("disconnected goal") {
    sc.map = shared_map({"..........#.........", "..........#.........", "..........#........."});
    CHECK_THROWS_AS(validate_scenario(sc), InfeasibleError);
  }
}

TEST_CASE("a lone robot on an empty map finishes at its true distance") {
  Scenario sc;
  sc.map = shared_map(std::vector<std::string>(10, std::string(12, '.')));
  sc.robots = {{2, {0, 0}, {9, 7}}};
  const RunRecord rec = run_scenario(sc);
  CHECK(rec.success);
  REQUIRE(rec.finish_ticks[0].has_value());
  CHECK(*rec.finish_ticks[0] == 9 + 7);
  CHECK(rec.makespan == 16.0);
  CHECK(rec.flowtime == 16.0);
  CHECK(rec.ideal_makespan == 16.0);
  CHECK(rec.replan_counts == std::vector<int>{0});
  CHECK(rec.wait_fallbacks == std::vector<int>{0});
  CHECK(rec.conflict_violations == 0);
}

TEST_CASE("compute_new_plan") {
  const GridMap m = oracle::map_from_rows({"......#", ".......", "......#"});
  const ConfigSpace cs(m, {1});
  const DistanceField d(cs, {6, 1});

  SUBCASE("no higher robots gives the unconstrained shortest path") {
    const NewPlan np = compute_new_plan(cs, d, {0, 0}, 4, {}, 7, 3, 100, 5);
    CHECK_FALSE(np.waiting);
    CHECK(np.plan.start_tick == 4);
    CHECK(np.plan.end_tick() == 4 + d.at({0, 0}));
  }
  SUBCASE("one crossing robot matches the space-time oracle") {
    Plan crossing;
    crossing.start_tick = 0;
    crossing.anchors = {{3, 0}, {3, 0}, {3, 1}, {3, 2}, {2, 2}};
    const NewPlan np = compute_new_plan(cs, d, {0, 1}, 0, {{1, crossing}}, 7, 3, 100, 5);
    CHECK_FALSE(np.waiting);
    CHECK(np.plan.end_tick() == oracle::spacetime_arrival(m, 1, {0, 1}, 0, {6, 1}, {crossing}, 100));
  }
  SUBCASE("a doorway held forever forces a wait, which clears once the holder is gone") {
    const Plan parked = make_wait_plan({5, 1}, 0, 1, 0);
    const NewPlan blocked = compute_new_plan(cs, d, {0, 1}, 2, {{1, parked}}, 7, 3, 100, 5);
    CHECK(blocked.waiting);
    CHECK(blocked.plan.start_tick == 2);
    CHECK(blocked.plan.end_tick() == 7);
    CHECK(blocked.plan.goal_hold);
    for (Anchor a : blocked.plan.anchors) CHECK(a == Anchor{0, 1});

    const NewPlan free = compute_new_plan(cs, d, {0, 1}, 7, {}, 7, 3, 100, 5);
    CHECK_FALSE(free.waiting);
    CHECK(free.plan.anchors.back() == Anchor{6, 1});
  }
  SUBCASE("a conflicted current position is an invariant violation") {
    const Plan on_top = make_wait_plan({0, 1}, 0, 1, 3);
    CHECK_THROWS_AS(compute_new_plan(cs, d, {0, 1}, 1, {{1, on_top}}, 7, 3, 100, 5), InvariantViolation);
  }
}

TEST_CASE("robots that never come within range never list each other") {
  Scenario sc;
  sc.map = shared_map({"..........#.........", "..........#.........", "..........#.........",
                       "...................."});
  sc.robots = {{1, {0, 0}, {8, 0}}, {1, {19, 0}, {12, 0}}};
  sc.comm_range = 4.0;
  Simulation sim(sc);
  while (sim.step()) {
    for (int n = 0; n < 2; ++n) {
      CHECK(sim.robot(n).higher.empty());
      CHECK(sim.robot(n).lower.empty());
    }
  }
  const RunRecord rec = sim.record();
  CHECK(rec.success);
  CHECK(rec.ever_neighbors[0].empty());
  CHECK(rec.ever_neighbors[1].empty());
  CHECK(rec.replan_counts == std::vector<int>{0, 0});
}

TEST_CASE("entering and leaving range trigger replans only for the lower robot") {
  Simulation sim(crossing_lanes(5.0));
  int entered_at = -1;
  int left_at = -1;
  while (sim.step()) {
    check_lists(sim);
    const RobotState& high = sim.robot(0);
    const RobotState& low = sim.robot(1);
    if (entered_at < 0 && !low.higher.empty()) {
      entered_at = sim.tick();
      CHECK(low.higher == std::set<int>{0});
      CHECK(high.lower == std::set<int>{1});
      CHECK(low.replan_count == 1);
      CHECK(high.replan_count == 0);
    }
    if (entered_at >= 0 && left_at < 0 && low.higher.empty()) {
      left_at = sim.tick();
      CHECK(low.replan_count == 2);
      CHECK(high.replan_count == 0);
    }
  }
  CHECK(entered_at > 0);
  CHECK(left_at > entered_at);
  const RunRecord rec = sim.record();
  CHECK(rec.success);
  CHECK(rec.makespan == 19.0);
}

TEST_CASE("a wider robot first beats the reversed order on the motivation map") {
  Scenario sc = oracle::motivation_scenario();
  const std::vector<double> initial = initial_prospects(sc);
  CHECK(initial == std::vector<double>{2.0, 1.0});

  Simulation sim(sc);
  REQUIRE(sim.step());
  CHECK(sim.robot(0).higher == std::set<int>{1});
  CHECK(sim.robot(1).lower == std::set<int>{0});
  const RunRecord by_prospects = sim.run();

  Scenario reversed = sc;
  reversed.fixed_ranks = {0, 1};
  const RunRecord small_first = run_scenario(reversed);

  REQUIRE(by_prospects.success);
  REQUIRE(small_first.success);
  // The wide robot keeps its only route; the small one takes the lane.
  CHECK(*by_prospects.finish_ticks[1] == by_prospects.true_distances[1]);
  CHECK(*by_prospects.finish_ticks[0] > by_prospects.true_distances[0]);
  CHECK(by_prospects.makespan < small_first.makespan);
  CHECK(by_prospects.flowtime < small_first.flowtime);
  CHECK(by_prospects.conflict_violations == 0);
  CHECK(small_first.conflict_violations == 0);
}

TEST_CASE("desk-scale runs are conflict-free, ordered and deterministic") {
  const auto map = std::make_shared<const GridMap>(generate_map(MapKind::Clutter, 30, 30, 2));
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 21; ++seed) {
    Scenario sc = generate_problem(map, parse_roster("1x2,2x2,3x2"), seed);
    sc.comm_range = seed % 2 ? 12.0 : 20.0;
    sc.heuristic.kind = kAllHeuristics[seed % 7];
    CAPTURE(seed);

    Simulation sim(sc);
    while (sim.step()) check_lists(sim);
    const RunRecord rec = sim.record();
    successes += rec.success ? 1 : 0;
    CHECK(rec.conflict_violations == 0);
    CHECK(independent_conflicts(rec) == 0);
    CHECK(rec.conflict_violations == count_trajectory_conflicts(rec.trajectories, rec.rhos));
    CHECK(rec.negotiation.cyclic_orders == 0);
    CHECK(rec.negotiation.inconsistent_orders == 0);
    CHECK(rec.negotiation.rounds_over_bound == 0);
    for (std::size_t n = 0; n < rec.trajectories.size(); ++n) {
      const auto& tr = rec.trajectories[n];
      CHECK(tr.front() == sc.robots[n].start);
      for (std::size_t t = 1; t < tr.size(); ++t) CHECK(manhattan(tr[t - 1], tr[t]) <= 1);
      if (rec.success) CHECK(tr.back() == sc.robots[n].goal);
    }
    if (rec.success) {
      double sum = 0;
      double worst = 0;
      for (const auto& f : rec.finish_ticks) {
        sum += *f;
        worst = std::max(worst, static_cast<double>(*f));
      }
      CHECK(rec.flowtime == doctest::Approx(sum / static_cast<double>(rec.finish_ticks.size())));
      CHECK(rec.makespan == worst);
      CHECK(rec.makespan <= rec.t_max);
      CHECK(rec.flowtime >= rec.ideal_flowtime);
      CHECK(rec.makespan >= rec.ideal_makespan);
    }

    // Every robot's bound is the largest distance it has heard announced.
    for (std::size_t n = 0; n < rec.true_distances.size(); ++n) {
      int expected = rec.true_distances[n];
      for (int m : rec.heard_from[n]) expected = std::max(expected, rec.true_distances[static_cast<std::size_t>(m)]);
      CHECK(rec.bound_estimates[n] == expected);
      CHECK(rec.heard_from[n] == rec.ever_neighbors[n]);
    }

    const RunRecord again = run_scenario(sc);
    CHECK(again.finish_ticks == rec.finish_ticks);
    CHECK(again.trajectories == rec.trajectories);
    CHECK(again.replan_counts == rec.replan_counts);
    CHECK(again.negotiation.negotiations == rec.negotiation.negotiations);
  }
  CHECK(successes >= 19);
}

TEST_CASE("event log records negotiation") {
  std::ostringstream log;
  RunOptions opts;
  opts.event_log = &log;
  run_scenario(crossing_lanes(5.0), opts);
  const std::string text = log.str();
  CHECK(text.find("r1 enter r0") != std::string::npos);
  CHECK(text.find("r1 leave r0") != std::string::npos);
}

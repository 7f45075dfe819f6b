#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "pathprospects/gridmap.hpp"
#include "pathprospects/priority.hpp"
#include "pathprospects/spacetime.hpp"

namespace pp {

struct RobotSpec {
  int rho = 1;
  Anchor start;
  Anchor goal;
};

struct Scenario {
  std::shared_ptr<const GridMap> map;
  std::vector<RobotSpec> robots;
  double comm_range = 20.0;  // Euclidean distance between footprint centres
  HeuristicKind heuristic;
  std::uint64_t seed = 0;
  int t_max = 0;       // 0 selects default_t_max(*map)
  int wait_ticks = 5;  // length of the wait-in-place fallback plan
  // Optional experiment override: rank per robot, lower rank = higher priority.
  std::vector<int> fixed_ranks;
};

int default_t_max(const GridMap& map);
int effective_t_max(const Scenario& sc);

/// Smallest range at which two robots out of range cannot collide within one tick.
double minimum_safe_range(const Scenario& sc);

/// Throws InfeasibleError when starts/goals overlap, an endpoint is blocked or
/// disconnected, or the range is too small to negotiate before contact.
void validate_scenario(const Scenario& sc);

/// Local state of one simulated robot.
struct RobotState {
  int id = 0;
  int rho = 1;
  Anchor start;
  Anchor goal;
  Anchor position;
  Plan plan;
  PriorityScore priority;
  std::set<int> higher;     // H: in-range robots with higher priority
  std::set<int> lower;      // L: in-range robots with lower priority
  std::set<int> neighbors;  // currently within communication range
  std::map<int, PriorityScore> known_priorities;
  int announced_true_distance = 0;  // true distance start -> goal, broadcast with the priority
  int bound_estimate = 0;           // running max of announced distances heard so far
  std::set<int> heard_from;
  std::set<int> ever_neighbors;
  int replan_count = 0;
  int wait_fallbacks = 0;
  int waiting_until = -1;  // end of the current wait-in-place stall, -1 when moving on a plan
  std::optional<int> finished_tick;
  bool stale = false;  // plan no longer matches execution (stopped by the motion guard)
  int priority_tick = -1;
};

/// Negotiation statistics over a run. K is the size of the largest communication
/// component that took part in a negotiation.
struct NegotiationStats {
  int negotiations = 0;
  int max_plan_rounds = 0;
  int max_priority_rounds = 0;
  int rounds_over_bound = 0;  // negotiations whose plan or priority rounds exceeded K
  int order_checks = 0;
  int cyclic_orders = 0;        // fixed points whose H relation had a cycle
  int inconsistent_orders = 0;  // fixed points where m in H_n but n not in L_m
};

struct RunRecord {
  bool success = false;
  int end_tick = 0;
  int t_max = 0;
  std::vector<std::optional<int>> finish_ticks;
  double flowtime = 0.0;  // mean finish tick (NaN unless success)
  double makespan = 0.0;  // max finish tick (NaN unless success)
  double ideal_flowtime = 0.0;
  double ideal_makespan = 0.0;
  std::vector<int> true_distances;
  std::vector<int> replan_counts;
  std::vector<int> wait_fallbacks;
  std::vector<int> bound_estimates;
  std::vector<std::set<int>> heard_from;
  std::vector<std::set<int>> ever_neighbors;
  NegotiationStats negotiation;
  int guard_stops = 0;
  int conflict_violations = 0;  // post-run exhaustive footprint check
  std::vector<int> rhos;
  std::vector<std::vector<Anchor>> trajectories;  // executed anchor per tick
};

struct RunOptions {
  std::ostream* event_log = nullptr;
  bool keep_trajectories = true;
};

/// Result of ComputeNewPlan: a plan around every higher-priority reservation, or a
/// wait-in-place plan when none exists.
struct NewPlan {
  Plan plan;
  bool waiting = false;
};

NewPlan compute_new_plan(const ConfigSpace& cs, const DistanceField& dist, Anchor position, int tick,
                         const std::vector<std::pair<int, Plan>>& reserved, int map_width, int map_height,
                         int t_max, int wait_ticks);

/// Union-of-endpoints footprint check over executed trajectories (one anchor per tick).
int count_trajectory_conflicts(const std::vector<std::vector<Anchor>>& trajectories, const std::vector<int>& rhos);

/// Lockstep simulation of the decentralized protocol. Each tick: detect range events,
/// negotiate to a fixed point, then advance every robot one plan step.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario, RunOptions options = {});
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs one tick. Returns false once the mission is complete or t_max is reached.
  bool step();
  RunRecord run();

  int tick() const;
  bool done() const;
  const RobotState& robot(int id) const;
  int robot_count() const;
  const NegotiationStats& negotiation_stats() const;
  RunRecord record() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunRecord run_scenario(const Scenario& sc, const RunOptions& options = {});

}  // namespace pp

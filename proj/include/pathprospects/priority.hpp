#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pathprospects/gridmap.hpp"

namespace pp {

/// Broadcastable priority key. Smaller compares higher: (primary, tiebreak, robot_id)
/// lexicographically, so any set of scores with distinct ids is strictly ordered.
struct PriorityScore {
  double primary_value = 0.0;
  double tiebreak_value = 0.0;
  int robot_id = 0;

  friend bool operator==(const PriorityScore&, const PriorityScore&) = default;
};

/// True when `a` has higher priority than `b`. Throws on identical robot ids.
bool higher_priority(const PriorityScore& a, const PriorityScore& b);

enum class Precedence { AHigher, BHigher };
Precedence compare(const PriorityScore& a, const PriorityScore& b);

enum class Heuristic { NS, CS, LF, FL, PP_R, PP_LF, R };

inline constexpr Heuristic kAllHeuristics[] = {Heuristic::NS,   Heuristic::CS,    Heuristic::LF, Heuristic::FL,
                                               Heuristic::PP_R, Heuristic::PP_LF, Heuristic::R};

/// Canonical identifiers: NS, CS, LF, FL, PP-R, PP-LF, R.
std::string_view to_string(Heuristic h);
Heuristic parse_heuristic(std::string_view name);
std::vector<Heuristic> parse_heuristic_list(std::string_view csv);

struct HeuristicKind {
  Heuristic kind = Heuristic::PP_LF;
  int range = 30;  // NS/CS obstacle-count radius (Chebyshev, cells)
};

void validate(const HeuristicKind& kind);

/// Everything a robot knows locally when it evaluates its own priority.
struct PriorityInput {
  int robot_id = 0;
  Anchor position;
  int tick = 0;
  const GridMap* map = nullptr;
  const ConfigSpace* cs = nullptr;
  const DistanceField* dist = nullptr;  // true distance to the robot's goal
  int bound = 0;                        // estimated longest true distance of the team
  std::uint64_t seed = 0;
};

/// One uniform [0, 1) draw per (seed, robot): stable across evaluations.
double robot_random_value(std::uint64_t seed, int robot_id);

PriorityScore compute_priority(const HeuristicKind& kind, const PriorityInput& in);

/// Obstacle components (of the map, or effective obstacles of `cs`) with a cell inside the
/// Chebyshev box of radius `range` around the footprint centre.
int count_original_obstacles_near(const GridMap& map, Anchor anchor, int rho, int range);
int count_effective_obstacles_near(const ConfigSpace& cs, Anchor anchor, int range);

}  // namespace pp

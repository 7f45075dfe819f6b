#include "pathprospects/priority.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>

#include "pathprospects/prospects.hpp"

namespace pp {

bool higher_priority(const PriorityScore& a, const PriorityScore& b) {
  if (a.robot_id == b.robot_id) throw std::invalid_argument("cannot order two scores of the same robot");
  return std::tie(a.primary_value, a.tiebreak_value, a.robot_id) <
         std::tie(b.primary_value, b.tiebreak_value, b.robot_id);
}

Precedence compare(const PriorityScore& a, const PriorityScore& b) {
  return higher_priority(a, b) ? Precedence::AHigher : Precedence::BHigher;
}

std::string_view to_string(Heuristic h) {
  switch (h) {
    case Heuristic::NS: return "NS";
    case Heuristic::CS: return "CS";
    case Heuristic::LF: return "LF";
    case Heuristic::FL: return "FL";
    case Heuristic::PP_R: return "PP-R";
    case Heuristic::PP_LF: return "PP-LF";
    case Heuristic::R: return "R";
  }
  return "?";
}

Heuristic parse_heuristic(std::string_view name) {
  for (Heuristic h : kAllHeuristics)
    if (to_string(h) == name) return h;
  throw ParseError("unknown heuristic '" + std::string(name) + "' (expected NS, CS, LF, FL, PP-R, PP-LF or R)");
}

std::vector<Heuristic> parse_heuristic_list(std::string_view csv) {
  std::vector<Heuristic> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto end = csv.find(',', pos);
    if (end == std::string_view::npos) end = csv.size();
    auto item = csv.substr(pos, end - pos);
    if (!item.empty()) out.push_back(parse_heuristic(item));
    pos = end + 1;
  }
  if (out.empty()) throw ParseError("empty heuristic list");
  return out;
}

void validate(const HeuristicKind& kind) {
  if ((kind.kind == Heuristic::NS || kind.kind == Heuristic::CS) && kind.range < 0)
    throw std::invalid_argument("obstacle-count range must be non-negative");
}

double robot_random_value(std::uint64_t seed, int robot_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(robot_id), 0x9e3779b9u};
  std::mt19937_64 rng(seq);
  // Top 53 bits give an exactly representable value in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int count_original_obstacles_near(const GridMap& map, Anchor anchor, int rho, int range) {
  // Doubled coordinates keep the footprint centre integral.
  const int cx2 = 2 * anchor.x + rho - 1;
  const int cy2 = 2 * anchor.y + rho - 1;
  int count = 0;
  for (const auto& comp : map.obstacle_components()) {
    for (Anchor c : comp) {
      if (std::abs(2 * c.x - cx2) <= 2 * range && std::abs(2 * c.y - cy2) <= 2 * range) {
        ++count;
        break;
      }
    }
  }
  return count;
}

int count_effective_obstacles_near(const ConfigSpace& cs, Anchor anchor, int range) {
  int count = 0;
  for (const auto& comp : cs.effective_obstacles()) {
    for (Anchor c : comp) {
      if (std::abs(c.x - anchor.x) <= range && std::abs(c.y - anchor.y) <= range) {
        ++count;
        break;
      }
    }
  }
  return count;
}

PriorityScore compute_priority(const HeuristicKind& kind, const PriorityInput& in) {
  validate(kind);
  if (in.map == nullptr || in.cs == nullptr) throw std::invalid_argument("priority needs the map and config space");
  if (in.dist == nullptr) throw std::invalid_argument("priority needs the robot's distance field");
  if (!in.cs->is_valid(in.position)) throw std::invalid_argument("robot is not on a valid anchor");
  if (!in.dist->reachable(in.position)) throw std::invalid_argument("robot cannot reach its goal");

  const double remaining = in.dist->at(in.position);
  PriorityScore s;
  s.robot_id = in.robot_id;

  auto forward = [&] { return forwards_vertices(*in.cs, in.position, in.tick, in.dist->goal(), *in.dist, in.bound); };

  switch (kind.kind) {
    case Heuristic::NS:
      s.primary_value = -count_original_obstacles_near(*in.map, in.position, in.cs->rho(), kind.range);
      s.tiebreak_value = -remaining;
      break;
    case Heuristic::CS:
      s.primary_value = -count_effective_obstacles_near(*in.cs, in.position, kind.range);
      s.tiebreak_value = -remaining;
      break;
    case Heuristic::LF:
      s.primary_value = -remaining;
      s.tiebreak_value = robot_random_value(in.seed, in.robot_id);
      break;
    case Heuristic::FL: {
      const ForwardSet fs = forward();
      int kappa = 0;
      for (int e : enclosed_effective_obstacles(*in.cs, fs))
        kappa += in.cs->original_per_effective()[static_cast<std::size_t>(e)];
      s.primary_value = std::ldexp(1.0, kappa);
      s.tiebreak_value = -remaining;
      break;
    }
    case Heuristic::PP_R:
      s.primary_value = path_prospects(*in.cs, forward()).prospects;
      s.tiebreak_value = robot_random_value(in.seed, in.robot_id);
      break;
    case Heuristic::PP_LF:
      s.primary_value = path_prospects(*in.cs, forward()).prospects;
      s.tiebreak_value = -remaining;
      break;
    case Heuristic::R:
      s.primary_value = robot_random_value(in.seed, in.robot_id);
      s.tiebreak_value = 0.0;
      break;
  }
  return s;
}

}  // namespace pp

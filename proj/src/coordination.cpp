#include "pathprospects/coordination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace pp {

int default_t_max(const GridMap& map) { return 8 * (map.width() + map.height()); }

int effective_t_max(const Scenario& sc) { return sc.t_max > 0 ? sc.t_max : default_t_max(*sc.map); }

double minimum_safe_range(const Scenario& sc) {
  int rho_max = 1;
  for (const auto& r : sc.robots) rho_max = std::max(rho_max, r.rho);
  // Footprints can only meet when centres are closer than sqrt(2) * rho_max, and each
  // robot closes at most one cell per tick.
  return std::sqrt(2.0) * rho_max + 2.0;
}

namespace {

bool transitions_conflict(Anchor a_from, Anchor a_to, int rho_a, Anchor b_from, Anchor b_to, int rho_b) {
  return squares_overlap(a_from, rho_a, b_from, rho_b) || squares_overlap(a_from, rho_a, b_to, rho_b) ||
         squares_overlap(a_to, rho_a, b_from, rho_b) || squares_overlap(a_to, rho_a, b_to, rho_b);
}

bool in_range(Anchor a, int rho_a, Anchor b, int rho_b, double range) {
  const double dx = (a.x + (rho_a - 1) / 2.0) - (b.x + (rho_b - 1) / 2.0);
  const double dy = (a.y + (rho_a - 1) / 2.0) - (b.y + (rho_b - 1) / 2.0);
  return dx * dx + dy * dy < range * range;
}

// Plans agree from `tick` onwards (both hold their last anchor forever).
bool same_future(const Plan& a, const Plan& b, int tick) {
  if (a.goal_hold != b.goal_hold) return false;
  const int last = std::max({a.end_tick(), b.end_tick(), tick});
  for (int k = tick; k <= last; ++k)
    if (!(a.at(k) == b.at(k))) return false;
  return true;
}

}  // namespace

void validate_scenario(const Scenario& sc) {
  if (!sc.map) throw InfeasibleError("scenario has no map");
  if (sc.robots.empty()) throw InfeasibleError("scenario has no robots");
  if (!std::isfinite(sc.comm_range) || sc.comm_range <= 0) throw InfeasibleError("communication range must be positive");
  if (sc.t_max < 0) throw InfeasibleError("t_max must be non-negative");
  if (sc.wait_ticks < 1) throw InfeasibleError("wait duration must be at least one tick");
  if (!sc.fixed_ranks.empty() && sc.fixed_ranks.size() != sc.robots.size())
    throw InfeasibleError("fixed ranks must list one rank per robot");
  validate(sc.heuristic);
  if (sc.comm_range < minimum_safe_range(sc))
    throw InfeasibleError("communication range " + std::to_string(sc.comm_range) +
                          " is below the safe minimum " + std::to_string(minimum_safe_range(sc)));

  std::map<int, ConfigSpace> spaces;
  for (std::size_t i = 0; i < sc.robots.size(); ++i) {
    const RobotSpec& r = sc.robots[i];
    if (r.rho < 1) throw InfeasibleError("robot " + std::to_string(i) + " has a non-positive footprint");
    auto it = spaces.find(r.rho);
    if (it == spaces.end()) it = spaces.emplace(r.rho, build_config_space(*sc.map, Footprint{r.rho})).first;
    const ConfigSpace& cs = it->second;
    if (!cs.is_valid(r.start)) throw InfeasibleError("robot " + std::to_string(i) + " start is blocked");
    if (!cs.is_valid(r.goal)) throw InfeasibleError("robot " + std::to_string(i) + " goal is blocked");
    if (bfs_distances(cs, r.start)[cs.index(r.goal)] == DistanceField::kUnreachable)
      throw InfeasibleError("robot " + std::to_string(i) + " cannot reach its goal");
  }
  for (std::size_t i = 0; i < sc.robots.size(); ++i) {
    for (std::size_t j = i + 1; j < sc.robots.size(); ++j) {
      const RobotSpec& a = sc.robots[i];
      const RobotSpec& b = sc.robots[j];
      if (squares_overlap(a.start, a.rho, b.start, b.rho))
        throw InfeasibleError("starts of robots " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      if (squares_overlap(a.goal, a.rho, b.goal, b.rho))
        throw InfeasibleError("goals of robots " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }
}

NewPlan compute_new_plan(const ConfigSpace& cs, const DistanceField& dist, Anchor position, int tick,
                         const std::vector<std::pair<int, Plan>>& reserved, int map_width, int map_height,
                         int t_max, int wait_ticks) {
  ReservationTable table(map_width, map_height);
  for (const auto& [id, plan] : reserved) table.reserve(id, plan);
  // Executed footprints never overlap, so the current cell can only be taken by a stale plan.
  if (table.footprint_blocked(position, cs.rho(), tick))
    throw InvariantViolation("current position is reserved by another robot at tick " + std::to_string(tick));
  if (auto plan = plan_path(cs, dist, position, tick, table, t_max)) return {std::move(*plan), false};
  return {make_wait_plan(position, tick, cs.rho(), wait_ticks), true};
}

int count_trajectory_conflicts(const std::vector<std::vector<Anchor>>& trajectories, const std::vector<int>& rhos) {
  if (trajectories.size() != rhos.size()) throw std::invalid_argument("one footprint per trajectory required");
  std::size_t ticks = 0;
  for (const auto& t : trajectories) ticks = std::max(ticks, t.size());
  auto at = [&](std::size_t n, std::size_t k) {
    const auto& tr = trajectories[n];
    return tr[std::min(k, tr.size() - 1)];
  };
  int violations = 0;
  for (std::size_t k = 0; k + 1 < std::max<std::size_t>(ticks, 2); ++k) {
    for (std::size_t a = 0; a < trajectories.size(); ++a) {
      for (std::size_t b = a + 1; b < trajectories.size(); ++b) {
        if (trajectories[a].empty() || trajectories[b].empty()) continue;
        if (transitions_conflict(at(a, k), at(a, k + 1), rhos[a], at(b, k), at(b, k + 1), rhos[b])) ++violations;
      }
    }
  }
  return violations;
}

// ---------------------------------------------------------------------------

struct Simulation::Impl {
  enum class MsgKind { Enter, Leave, Priority, PlanUpdate, Retry };
  struct Message {
    MsgKind kind;
    int from;
    PriorityScore score;
    int distance;
  };

  Scenario sc;
  RunOptions options;
  int t_max = 0;
  int map_w = 0;
  int map_h = 0;
  std::map<int, std::unique_ptr<ConfigSpace>> spaces;
  std::vector<const ConfigSpace*> cs_of;
  std::vector<std::unique_ptr<DistanceField>> dist_of;
  std::vector<RobotState> robots;
  std::vector<Plan> published;
  std::vector<std::uint8_t> in_range_now;  // N*N
  std::vector<std::vector<Anchor>> trajectories;
  std::vector<int> at_goal_since;
  NegotiationStats stats;
  int tick = 0;
  bool finished = false;
  bool success = false;
  int guard_stops = 0;

  int n() const { return static_cast<int>(robots.size()); }

  void log(const std::string& line) const {
    if (options.event_log) *options.event_log << "t=" << tick << ' ' << line << '\n';
  }

  PriorityScore evaluate_priority(int id) const {
    const RobotState& r = robots[static_cast<std::size_t>(id)];
    if (!sc.fixed_ranks.empty()) return {static_cast<double>(sc.fixed_ranks[static_cast<std::size_t>(id)]), 0.0, id};
    PriorityInput in;
    in.robot_id = id;
    in.position = r.position;
    in.tick = tick;
    in.map = sc.map.get();
    in.cs = cs_of[static_cast<std::size_t>(id)];
    in.dist = dist_of[static_cast<std::size_t>(id)].get();
    in.bound = r.bound_estimate;
    in.seed = sc.seed;
    return compute_priority(sc.heuristic, in);
  }

  // ComputePriority, evaluated at most once per tick: the inputs (position, tick, bound)
  // do not change while a tick's negotiation runs.
  bool refresh_priority(int id) {
    RobotState& r = robots[static_cast<std::size_t>(id)];
    if (r.priority_tick == tick) return false;
    r.priority_tick = tick;
    const PriorityScore fresh = evaluate_priority(id);
    if (fresh == r.priority) return false;
    r.priority = fresh;
    log("r" + std::to_string(id) + " priority " + std::to_string(fresh.primary_value) + "/" +
        std::to_string(fresh.tiebreak_value));
    return true;
  }

  // Splits the neighbour set into H and L by the currently known priorities.
  bool rebuild_lists(int id) {
    RobotState& r = robots[static_cast<std::size_t>(id)];
    std::set<int> higher;
    std::set<int> lower;
    for (int m : r.neighbors) {
      const PriorityScore& other = r.known_priorities.at(m);
      (higher_priority(other, r.priority) ? higher : lower).insert(m);
    }
    const bool changed = higher != r.higher;
    r.higher = std::move(higher);
    r.lower = std::move(lower);
    return changed;
  }

  bool replan(int id) {
    RobotState& r = robots[static_cast<std::size_t>(id)];
    std::vector<std::pair<int, Plan>> higher;
    higher.reserve(r.higher.size());
    for (int m : r.higher) higher.emplace_back(m, published[static_cast<std::size_t>(m)]);
    // Lower-priority neighbours need the next two ticks to clear the cells they stand on:
    // under the swept-union rule nobody can enter a footprint during the tick it is left.
    // A neighbour stalled in wait-in-place keeps its cells until it moves again.
    for (int m : r.lower) {
      const RobotState& other = robots[static_cast<std::size_t>(m)];
      Plan here;
      here.start_tick = tick;
      here.rho = other.rho;
      here.anchors = {other.position, other.position};
      here.goal_hold = other.waiting_until >= tick;
      higher.emplace_back(-1 - m, std::move(here));
    }
    NewPlan np = compute_new_plan(*cs_of[static_cast<std::size_t>(id)], *dist_of[static_cast<std::size_t>(id)],
                                  r.position, tick, higher, map_w, map_h, t_max, sc.wait_ticks);
    ++r.replan_count;
    r.waiting_until = np.waiting ? np.plan.end_tick() : -1;
    if (np.waiting) {
      ++r.wait_fallbacks;
      log("r" + std::to_string(id) + " wait " + std::to_string(sc.wait_ticks));
    } else {
      log("r" + std::to_string(id) + " replan arrive " + std::to_string(np.plan.end_tick()));
    }
    const bool changed = !same_future(np.plan, r.plan, tick);
    r.plan = std::move(np.plan);
    return changed;
  }

  std::vector<int> components() const {
    std::vector<int> comp(static_cast<std::size_t>(n()), -1);
    int next = 0;
    for (int s = 0; s < n(); ++s) {
      if (comp[static_cast<std::size_t>(s)] >= 0) continue;
      std::vector<int> stack{s};
      comp[static_cast<std::size_t>(s)] = next;
      while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        for (int b = 0; b < n(); ++b) {
          if (comp[static_cast<std::size_t>(b)] < 0 && in_range_now[static_cast<std::size_t>(a * n() + b)]) {
            comp[static_cast<std::size_t>(b)] = next;
            stack.push_back(b);
          }
        }
      }
      ++next;
    }
    return comp;
  }

  void check_order() {
    ++stats.order_checks;
    for (int a = 0; a < n(); ++a) {
      const RobotState& r = robots[static_cast<std::size_t>(a)];
      std::set<int> both;
      std::set_union(r.higher.begin(), r.higher.end(), r.lower.begin(), r.lower.end(),
                     std::inserter(both, both.end()));
      bool ok = both.size() == r.higher.size() + r.lower.size() && both == r.neighbors;
      for (int m : r.higher) ok = ok && robots[static_cast<std::size_t>(m)].lower.count(a) > 0;
      if (!ok) {
        ++stats.inconsistent_orders;
        log("r" + std::to_string(a) + " inconsistent H/L lists");
      }
    }
    // Cycle search over edges n -> m for m in H_n.
    std::vector<int> color(static_cast<std::size_t>(n()), 0);
    bool cyclic = false;
    for (int s = 0; s < n() && !cyclic; ++s) {
      if (color[static_cast<std::size_t>(s)] != 0) continue;
      std::vector<std::pair<int, std::set<int>::const_iterator>> stack;
      stack.emplace_back(s, robots[static_cast<std::size_t>(s)].higher.begin());
      color[static_cast<std::size_t>(s)] = 1;
      while (!stack.empty() && !cyclic) {
        auto& [node, it] = stack.back();
        if (it == robots[static_cast<std::size_t>(node)].higher.end()) {
          color[static_cast<std::size_t>(node)] = 2;
          stack.pop_back();
          continue;
        }
        const int m = *it++;
        if (color[static_cast<std::size_t>(m)] == 1) {
          cyclic = true;
        } else if (color[static_cast<std::size_t>(m)] == 0) {
          color[static_cast<std::size_t>(m)] = 1;
          stack.emplace_back(m, robots[static_cast<std::size_t>(m)].higher.begin());
        }
      }
    }
    if (cyclic) {
      ++stats.cyclic_orders;
      log("cyclic priority relation");
    }
  }

  void negotiate(const std::vector<std::pair<int, int>>& enters, const std::vector<std::pair<int, int>>& leaves) {
    const std::size_t N = static_cast<std::size_t>(n());
    std::vector<std::vector<Message>> inbox(N);
    std::vector<std::uint8_t> force_broadcast(N, 0);

    for (auto [a, b] : leaves) {
      inbox[static_cast<std::size_t>(a)].push_back({MsgKind::Leave, b, {}, 0});
      log("r" + std::to_string(a) + " leave r" + std::to_string(b));
    }
    // Handshake: distances are exchanged with the priority on first contact, so both
    // ends refresh the bound before re-evaluating their own priority.
    std::vector<std::uint8_t> entered(N, 0);
    for (auto [a, b] : enters) {
      RobotState& r = robots[static_cast<std::size_t>(a)];
      r.heard_from.insert(b);
      r.bound_estimate = std::max(r.bound_estimate, robots[static_cast<std::size_t>(b)].announced_true_distance);
      entered[static_cast<std::size_t>(a)] = 1;
      log("r" + std::to_string(a) + " enter r" + std::to_string(b));
    }
    std::vector<std::vector<Message>> outbox(N);
    auto broadcast_priority = [&](int from) {
      const RobotState& r = robots[static_cast<std::size_t>(from)];
      for (int m : r.neighbors) outbox[static_cast<std::size_t>(m)].push_back({MsgKind::Priority, from, r.priority, 0});
    };
    for (std::size_t a = 0; a < N; ++a)
      if (entered[a] && refresh_priority(static_cast<int>(a))) broadcast_priority(static_cast<int>(a));
    for (auto [a, b] : enters) {
      const RobotState& other = robots[static_cast<std::size_t>(b)];
      inbox[static_cast<std::size_t>(a)].push_back({MsgKind::Enter, b, other.priority, other.announced_true_distance});
    }
    for (std::size_t a = 0; a < N; ++a) {
      RobotState& r = robots[a];
      const bool expired = tick >= r.plan.end_tick() && !(r.position == r.goal);
      if (r.stale || expired) {
        inbox[a].push_back({MsgKind::Retry, static_cast<int>(a), {}, 0});
        if (r.stale) force_broadcast[a] = 1;
        r.stale = false;
      }
    }
    // Priority updates generated by the handshake travel in the first round.
    for (std::size_t a = 0; a < N; ++a)
      for (auto& m : outbox[a]) inbox[a].push_back(m);
    for (auto& o : outbox) o.clear();

    const std::vector<int> comp = components();
    const int n_comp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> comp_size(static_cast<std::size_t>(n_comp), 0);
    for (int c : comp) ++comp_size[static_cast<std::size_t>(c)];
    std::vector<int> plan_rounds(static_cast<std::size_t>(n_comp), 0);
    std::vector<int> prio_rounds(static_cast<std::size_t>(n_comp), 0);
    std::vector<std::uint8_t> comp_active(static_cast<std::size_t>(n_comp), 0);
    std::vector<std::uint8_t> pending(N, 0);

    bool any_activity = false;
    for (;;) {
      bool work = false;
      for (std::size_t a = 0; a < N; ++a) work = work || !inbox[a].empty() || pending[a];
      if (!work) break;
      any_activity = true;

      std::vector<std::uint8_t> wave(static_cast<std::size_t>(n_comp), 0);
      for (std::size_t a = 0; a < N; ++a) {
        if (inbox[a].empty()) continue;
        const int id = static_cast<int>(a);
        RobotState& r = robots[a];
        comp_active[static_cast<std::size_t>(comp[a])] = 1;
        bool rebuild = false;
        for (const Message& msg : inbox[a]) {
          switch (msg.kind) {
            case MsgKind::Enter:
              r.neighbors.insert(msg.from);
              r.ever_neighbors.insert(msg.from);
              r.known_priorities[msg.from] = msg.score;
              rebuild = true;
              break;
            case MsgKind::Priority:
              if (!r.neighbors.count(msg.from)) break;
              r.known_priorities[msg.from] = msg.score;
              rebuild = true;
              if (refresh_priority(id)) broadcast_priority(id);
              break;
            case MsgKind::Leave:
              r.neighbors.erase(msg.from);
              r.known_priorities.erase(msg.from);
              r.lower.erase(msg.from);
              if (r.higher.erase(msg.from)) pending[a] = 1;
              break;
            case MsgKind::PlanUpdate:
              if (r.higher.count(msg.from)) pending[a] = 1;
              break;
            case MsgKind::Retry:
              pending[a] = 1;
              break;
          }
        }
        if (pending[a] && refresh_priority(id)) {
          broadcast_priority(id);
          rebuild = true;
        }
        if (rebuild && rebuild_lists(id)) pending[a] = 1;
      }
      for (std::size_t a = 0; a < N; ++a)
        if (!outbox[a].empty()) wave[static_cast<std::size_t>(comp[a])] = 1;

      // Plans are exchanged only once priorities in the component have settled.
      std::vector<std::uint8_t> planned(static_cast<std::size_t>(n_comp), 0);
      std::vector<int> replanned;
      for (std::size_t a = 0; a < N; ++a) {
        if (!pending[a] || wave[static_cast<std::size_t>(comp[a])]) continue;
        pending[a] = 0;
        planned[static_cast<std::size_t>(comp[a])] = 1;
        comp_active[static_cast<std::size_t>(comp[a])] = 1;
        const bool changed = replan(static_cast<int>(a));
        if (changed || force_broadcast[a]) {
          force_broadcast[a] = 0;
          replanned.push_back(static_cast<int>(a));
        }
      }
      for (int id : replanned) {
        published[static_cast<std::size_t>(id)] = robots[static_cast<std::size_t>(id)].plan;
        for (int m : robots[static_cast<std::size_t>(id)].neighbors)
          outbox[static_cast<std::size_t>(m)].push_back({MsgKind::PlanUpdate, id, {}, 0});
      }

      for (int c = 0; c < n_comp; ++c) {
        const std::size_t ci = static_cast<std::size_t>(c);
        if (wave[ci]) ++prio_rounds[ci];
        if (planned[ci]) ++plan_rounds[ci];
        if (plan_rounds[ci] > comp_size[ci] + 1 || prio_rounds[ci] > comp_size[ci] + 1)
          throw InvariantViolation("negotiation did not converge within " + std::to_string(comp_size[ci] + 1) +
                                   " rounds at tick " + std::to_string(tick));
      }
      for (std::size_t a = 0; a < N; ++a) {
        inbox[a].swap(outbox[a]);
        outbox[a].clear();
      }
    }

    if (!any_activity) return;
    for (int c = 0; c < n_comp; ++c) {
      const std::size_t ci = static_cast<std::size_t>(c);
      if (!comp_active[ci]) continue;
      ++stats.negotiations;
      stats.max_plan_rounds = std::max(stats.max_plan_rounds, plan_rounds[ci]);
      stats.max_priority_rounds = std::max(stats.max_priority_rounds, prio_rounds[ci]);
      if (plan_rounds[ci] > comp_size[ci] || prio_rounds[ci] > comp_size[ci]) ++stats.rounds_over_bound;
    }
    check_order();
  }

  void detect_range_events(std::vector<std::pair<int, int>>& enters, std::vector<std::pair<int, int>>& leaves) {
    for (int a = 0; a < n(); ++a) {
      for (int b = a + 1; b < n(); ++b) {
        const RobotState& ra = robots[static_cast<std::size_t>(a)];
        const RobotState& rb = robots[static_cast<std::size_t>(b)];
        const bool now = in_range(ra.position, ra.rho, rb.position, rb.rho, sc.comm_range);
        const std::size_t ab = static_cast<std::size_t>(a * n() + b);
        const std::size_t ba = static_cast<std::size_t>(b * n() + a);
        if (now != static_cast<bool>(in_range_now[ab])) {
          auto& list = now ? enters : leaves;
          list.emplace_back(a, b);
          list.emplace_back(b, a);
        }
        in_range_now[ab] = in_range_now[ba] = now ? 1 : 0;
      }
    }
    std::sort(enters.begin(), enters.end());
    std::sort(leaves.begin(), leaves.end());
  }

  // Stops moves that would collide with what another robot is doing this tick. Only
  // reachable when negotiation left two plans mutually unaware (e.g. after a replan
  // failure); a stopped robot keeps its cell and retries next tick.
  void guard(std::vector<Anchor>& intended) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int a = 0; a < n() && !changed; ++a) {
        for (int b = a + 1; b < n() && !changed; ++b) {
          const RobotState& ra = robots[static_cast<std::size_t>(a)];
          const RobotState& rb = robots[static_cast<std::size_t>(b)];
          const Anchor ta = intended[static_cast<std::size_t>(a)];
          const Anchor tb = intended[static_cast<std::size_t>(b)];
          if (!transitions_conflict(ra.position, ta, ra.rho, rb.position, tb, rb.rho)) continue;
          const bool move_a = !(ta == ra.position);
          const bool move_b = !(tb == rb.position);
          if (!move_a && !move_b) throw InvariantViolation("two stationary robots overlap");
          int stop = move_a ? a : b;
          if (move_a && move_b) stop = higher_priority(ra.priority, rb.priority) ? b : a;
          RobotState& rs = robots[static_cast<std::size_t>(stop)];
          intended[static_cast<std::size_t>(stop)] = rs.position;
          rs.plan = make_wait_plan(rs.position, tick, rs.rho, 1);
          published[static_cast<std::size_t>(stop)] = rs.plan;
          rs.stale = true;
          ++guard_stops;
          log("r" + std::to_string(stop) + " stopped by guard (r" + std::to_string(stop == a ? b : a) + ")");
          changed = true;
        }
      }
    }
  }

  bool mission_complete() const {
    for (const RobotState& r : robots)
      if (!(r.position == r.goal) || tick < r.plan.end_tick()) return false;
    return true;
  }

  bool step() {
    if (finished) return false;
    if (mission_complete()) {
      finished = true;
      success = true;
      return false;
    }
    if (tick >= t_max) {
      finished = true;
      success = false;
      return false;
    }
    std::vector<std::pair<int, int>> enters;
    std::vector<std::pair<int, int>> leaves;
    detect_range_events(enters, leaves);
    negotiate(enters, leaves);

    std::vector<Anchor> intended(static_cast<std::size_t>(n()));
    for (int a = 0; a < n(); ++a) {
      const RobotState& r = robots[static_cast<std::size_t>(a)];
      if (!(r.plan.at(tick) == r.position))
        throw InvariantViolation("robot " + std::to_string(a) + " plan disagrees with its position");
      intended[static_cast<std::size_t>(a)] = r.plan.at(tick + 1);
    }
    guard(intended);
    ++tick;
    for (int a = 0; a < n(); ++a) {
      RobotState& r = robots[static_cast<std::size_t>(a)];
      r.position = intended[static_cast<std::size_t>(a)];
      trajectories[static_cast<std::size_t>(a)].push_back(r.position);
      int& since = at_goal_since[static_cast<std::size_t>(a)];
      if (!(r.position == r.goal)) since = -1;
      else if (since < 0) since = tick;
      if (since >= 0 && tick >= r.plan.end_tick()) r.finished_tick = since;
      else r.finished_tick.reset();
    }
    return true;
  }

  RunRecord record() const {
    RunRecord rec;
    rec.success = finished && success;
    rec.end_tick = tick;
    rec.t_max = t_max;
    rec.negotiation = stats;
    rec.guard_stops = guard_stops;
    double sum_ideal = 0;
    double max_ideal = 0;
    double sum = 0;
    double worst = 0;
    for (int a = 0; a < n(); ++a) {
      const RobotState& r = robots[static_cast<std::size_t>(a)];
      const auto& tr = trajectories[static_cast<std::size_t>(a)];
      std::optional<int> finish;
      if (tr.back() == r.goal) {
        int k = static_cast<int>(tr.size()) - 1;
        while (k > 0 && tr[static_cast<std::size_t>(k - 1)] == r.goal) --k;
        finish = k;
      }
      rec.finish_ticks.push_back(finish);
      if (finish) {
        sum += *finish;
        worst = std::max(worst, static_cast<double>(*finish));
      }
      rec.true_distances.push_back(r.announced_true_distance);
      sum_ideal += r.announced_true_distance;
      max_ideal = std::max(max_ideal, static_cast<double>(r.announced_true_distance));
      rec.replan_counts.push_back(r.replan_count);
      rec.wait_fallbacks.push_back(r.wait_fallbacks);
      rec.bound_estimates.push_back(r.bound_estimate);
      rec.heard_from.push_back(r.heard_from);
      rec.ever_neighbors.push_back(r.ever_neighbors);
      rec.rhos.push_back(r.rho);
    }
    const double count = static_cast<double>(n());
    rec.ideal_flowtime = sum_ideal / count;
    rec.ideal_makespan = max_ideal;
    if (rec.success) {
      rec.flowtime = sum / count;
      rec.makespan = worst;
    } else {
      rec.flowtime = rec.makespan = std::numeric_limits<double>::quiet_NaN();
    }
    rec.conflict_violations = count_trajectory_conflicts(trajectories, rec.rhos);
    if (options.keep_trajectories) rec.trajectories = trajectories;
    return rec;
  }
};

Simulation::Simulation(const Scenario& scenario, RunOptions options) : impl_(std::make_unique<Impl>()) {
  validate_scenario(scenario);
  Impl& s = *impl_;
  s.sc = scenario;
  s.options = options;
  s.t_max = effective_t_max(scenario);
  s.map_w = scenario.map->width();
  s.map_h = scenario.map->height();
  const std::size_t N = scenario.robots.size();
  s.in_range_now.assign(N * N, 0);
  s.trajectories.resize(N);
  s.at_goal_since.assign(N, -1);
  s.published.resize(N);

  for (std::size_t i = 0; i < N; ++i) {
    const RobotSpec& spec = scenario.robots[i];
    auto it = s.spaces.find(spec.rho);
    if (it == s.spaces.end())
      it = s.spaces.emplace(spec.rho, std::make_unique<ConfigSpace>(*scenario.map, Footprint{spec.rho})).first;
    s.cs_of.push_back(it->second.get());
    s.dist_of.push_back(std::make_unique<DistanceField>(*it->second, spec.goal));

    RobotState r;
    r.id = static_cast<int>(i);
    r.rho = spec.rho;
    r.start = spec.start;
    r.goal = spec.goal;
    r.position = spec.start;
    r.announced_true_distance = s.dist_of.back()->at(spec.start);
    r.bound_estimate = r.announced_true_distance;
    s.robots.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < N; ++i) {
    RobotState& r = s.robots[i];
    // Own bound only; the first handshake re-evaluates with the gossiped bound.
    r.priority = s.evaluate_priority(static_cast<int>(i));
    NewPlan np = compute_new_plan(*s.cs_of[i], *s.dist_of[i], r.position, 0, {}, s.map_w, s.map_h, s.t_max,
                                  scenario.wait_ticks);
    if (np.waiting) {
      ++r.wait_fallbacks;
      r.waiting_until = np.plan.end_tick();
    }
    r.plan = std::move(np.plan);
    s.published[i] = r.plan;
    s.trajectories[i].push_back(r.position);
    if (r.position == r.goal) s.at_goal_since[i] = 0;
  }
}

Simulation::~Simulation() = default;

bool Simulation::step() { return impl_->step(); }

RunRecord Simulation::run() {
  while (impl_->step()) {
  }
  return impl_->record();
}

int Simulation::tick() const { return impl_->tick; }
bool Simulation::done() const { return impl_->finished; }
const RobotState& Simulation::robot(int id) const { return impl_->robots.at(static_cast<std::size_t>(id)); }
int Simulation::robot_count() const { return impl_->n(); }
const NegotiationStats& Simulation::negotiation_stats() const { return impl_->stats; }
RunRecord Simulation::record() const { return impl_->record(); }

RunRecord run_scenario(const Scenario& sc, const RunOptions& options) {
  Simulation sim(sc, options);
  return sim.run();
}

}  // namespace pp

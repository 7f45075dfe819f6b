#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathprospects/gridmap.hpp"

namespace pp {

/// Timestamped anchor trajectory: anchors[i] is the position at tick start_tick + i.
/// With goal_hold the last anchor stays occupied for every later tick.
struct Plan {
  int start_tick = 0;
  std::vector<Anchor> anchors;
  int rho = 1;
  bool goal_hold = true;

  bool empty() const { return anchors.empty(); }
  int end_tick() const { return start_tick + static_cast<int>(anchors.size()) - 1; }
  /// Position at `tick`; clamped to the first anchor before start and the last after the end.
  Anchor at(int tick) const;
  /// False past the end of a plan without goal_hold.
  bool present_at(int tick) const { return goal_hold || tick <= end_tick(); }

  friend bool operator==(const Plan&, const Plan&) = default;
};

/// Throws std::invalid_argument unless consecutive anchors are equal or 4-adjacent.
void check_well_formed(const Plan& plan);

/// Plan that stays at `where` from `tick` through `tick + duration`.
Plan make_wait_plan(Anchor where, int tick, int rho, int duration);

bool squares_overlap(Anchor a, int rho_a, Anchor b, int rho_b);

/// Transition (from -> to between `tick` and `tick + 1`) against one entry: true iff the
/// union of the mover's two footprints meets the union of the entry's footprints at
/// `tick` and `tick + 1`.
bool conflicts(Anchor from, Anchor to, int tick, int rho, const Plan& entry);

/// Swept volumes of higher-priority robots, indexed by tick for occupancy queries.
class ReservationTable {
 public:
  static constexpr int kForever = std::numeric_limits<int>::max();
  static constexpr int kNever = std::numeric_limits<int>::min();

  ReservationTable(int map_width, int map_height);

  /// Adds or replaces the entry for `owner`.
  void reserve(int owner, Plan plan);
  void release(int owner);

  const std::map<int, Plan>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  bool cell_occupied(int x, int y, int tick) const;
  bool footprint_blocked(Anchor a, int rho, int tick) const;
  /// Same rule as `conflicts`, evaluated against every entry at once.
  bool transition_blocked(Anchor from, Anchor to, int tick, int rho) const;
  /// Last tick at which any cell of the footprint is reserved; kForever when some entry
  /// holds it indefinitely, kNever when it is never reserved.
  int last_occupied_tick(Anchor a, int rho) const;
  /// Last tick after which the reserved set no longer changes.
  int horizon() const;

 private:
  void build_index() const;
  const std::vector<int>& cells_at(int tick) const;

  int map_width_;
  int map_height_;
  std::map<int, Plan> entries_;

  mutable bool dirty_ = true;
  mutable int base_tick_ = 0;
  mutable int horizon_ = 0;
  mutable std::vector<std::vector<int>> occupied_;  // sorted cell indices per tick in [base, horizon]
  mutable std::vector<int> held_;                   // cells reserved for every tick past the horizon
};

/// Space-time A* from (start, start_tick) to dist.goal() avoiding every reservation.
/// The returned plan arrives at the earliest tick t_f <= t_max from which holding the
/// goal forever is conflict-free; std::nullopt when no such plan exists.
std::optional<Plan> plan_path(const ConfigSpace& cs, const DistanceField& dist, Anchor start, int start_tick,
                              const ReservationTable& table, int t_max);

/// `robot <id> rho <rho> t0 <tick> : (x,y) (x,y) ...`
std::string format_plan_record(int robot_id, const Plan& plan);
std::pair<int, Plan> parse_plan_record(std::string_view line);

}  // namespace pp

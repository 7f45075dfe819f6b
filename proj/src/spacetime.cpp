#include "pathprospects/spacetime.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace pp {

Anchor Plan::at(int tick) const {
  if (anchors.empty()) throw std::logic_error("empty plan has no position");
  if (tick <= start_tick) return anchors.front();
  if (tick >= end_tick()) return anchors.back();
  return anchors[static_cast<std::size_t>(tick - start_tick)];
}

void check_well_formed(const Plan& plan) {
  if (plan.anchors.empty()) throw std::invalid_argument("plan has no anchors");
  if (plan.rho < 1) throw std::invalid_argument("plan footprint must be positive");
  if (plan.start_tick < 0) throw std::invalid_argument("plan starts before tick 0");
  for (std::size_t i = 1; i < plan.anchors.size(); ++i)
    if (manhattan(plan.anchors[i - 1], plan.anchors[i]) > 1)
      throw std::invalid_argument("plan teleports between tick " + std::to_string(plan.start_tick + i - 1) +
                                  " and " + std::to_string(plan.start_tick + i));
}

Plan make_wait_plan(Anchor where, int tick, int rho, int duration) {
  Plan p;
  p.start_tick = tick;
  p.rho = rho;
  p.anchors.assign(static_cast<std::size_t>(duration) + 1, where);
  p.goal_hold = true;
  return p;
}

bool squares_overlap(Anchor a, int rho_a, Anchor b, int rho_b) {
  return a.x < b.x + rho_b && b.x < a.x + rho_a && a.y < b.y + rho_b && b.y < a.y + rho_a;
}

bool conflicts(Anchor from, Anchor to, int tick, int rho, const Plan& entry) {
  const Anchor mine[2] = {from, to};
  for (int dt = 0; dt <= 1; ++dt) {
    if (!entry.present_at(tick + dt)) continue;
    const Anchor theirs = entry.at(tick + dt);
    for (Anchor m : mine)
      if (squares_overlap(m, rho, theirs, entry.rho)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

ReservationTable::ReservationTable(int map_width, int map_height)
    : map_width_(map_width), map_height_(map_height) {}

void ReservationTable::reserve(int owner, Plan plan) {
  check_well_formed(plan);
  entries_.insert_or_assign(owner, std::move(plan));
  dirty_ = true;
}

void ReservationTable::release(int owner) {
  entries_.erase(owner);
  dirty_ = true;
}

void ReservationTable::build_index() const {
  if (!dirty_) return;
  dirty_ = false;
  occupied_.clear();
  held_.clear();
  if (entries_.empty()) {
    base_tick_ = 0;
    horizon_ = -1;
    return;
  }
  base_tick_ = std::numeric_limits<int>::max();
  horizon_ = std::numeric_limits<int>::min();
  for (const auto& [id, plan] : entries_) {
    base_tick_ = std::min(base_tick_, plan.start_tick);
    horizon_ = std::max(horizon_, plan.end_tick());
  }
  occupied_.resize(static_cast<std::size_t>(horizon_ - base_tick_ + 1));
  auto stamp = [&](std::vector<int>& out, Anchor a, int rho) {
    for (int y = a.y; y < a.y + rho; ++y)
      for (int x = a.x; x < a.x + rho; ++x) out.push_back(y * map_width_ + x);
  };
  for (const auto& [id, plan] : entries_) {
    for (int t = base_tick_; t <= horizon_; ++t)
      if (plan.present_at(t)) stamp(occupied_[static_cast<std::size_t>(t - base_tick_)], plan.at(t), plan.rho);
    if (plan.goal_hold) stamp(held_, plan.anchors.back(), plan.rho);
  }
  auto normalize = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (auto& v : occupied_) normalize(v);
  normalize(held_);
}

const std::vector<int>& ReservationTable::cells_at(int tick) const {
  static const std::vector<int> kNone;
  if (entries_.empty()) return kNone;
  if (tick > horizon_) return held_;
  return occupied_[static_cast<std::size_t>(std::max(tick, base_tick_) - base_tick_)];
}

bool ReservationTable::cell_occupied(int x, int y, int tick) const {
  build_index();
  const auto& cells = cells_at(tick);
  return std::binary_search(cells.begin(), cells.end(), y * map_width_ + x);
}

namespace {

bool rect_hits(const std::vector<int>& cells, int width, int x0, int y0, int x1, int y1) {
  if (cells.empty()) return false;
  for (int y = y0; y < y1; ++y) {
    // Cells of one row are contiguous in the sorted index; probe the row span once.
    auto it = std::lower_bound(cells.begin(), cells.end(), y * width + x0);
    if (it != cells.end() && *it < y * width + x1) return true;
  }
  return false;
}

}  // namespace

bool ReservationTable::footprint_blocked(Anchor a, int rho, int tick) const {
  build_index();
  return rect_hits(cells_at(tick), map_width_, a.x, a.y, a.x + rho, a.y + rho);
}

bool ReservationTable::transition_blocked(Anchor from, Anchor to, int tick, int rho) const {
  build_index();
  if (entries_.empty()) return false;
  for (int dt = 0; dt <= 1; ++dt) {
    const auto& cells = cells_at(tick + dt);
    if (rect_hits(cells, map_width_, from.x, from.y, from.x + rho, from.y + rho)) return true;
    if (!(to == from) && rect_hits(cells, map_width_, to.x, to.y, to.x + rho, to.y + rho)) return true;
  }
  return false;
}

int ReservationTable::last_occupied_tick(Anchor a, int rho) const {
  build_index();
  if (entries_.empty()) return kNever;
  if (rect_hits(held_, map_width_, a.x, a.y, a.x + rho, a.y + rho)) return kForever;
  for (int t = horizon_; t >= base_tick_; --t)
    if (footprint_blocked(a, rho, t)) return t;
  return kNever;
}

int ReservationTable::horizon() const {
  build_index();
  return horizon_;
}

// ---------------------------------------------------------------------------

namespace {

struct SearchNode {
  Anchor anchor;
  int tick;
  int waits;
  int parent;
};

struct OpenEntry {
  int f;
  int h;
  int waits;
  Anchor anchor;
  int node;
};

struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    if (a.waits != b.waits) return a.waits > b.waits;
    if (!(a.anchor == b.anchor)) return b.anchor < a.anchor;
    return a.node > b.node;
  }
};

// Closed set over (tick, anchor); ticks past the reservation horizon collapse into one
// layer because the reserved set is static from there on.
class ClosedSet {
 public:
  ClosedSet(int first_tick, int last_tick, int anchors) : first_(first_tick), anchors_(anchors) {
    const long long span = static_cast<long long>(last_tick - first_tick + 1) * anchors;
    dense_ = span <= (1LL << 26);
    if (dense_) bits_.assign(static_cast<std::size_t>(span), false);
  }

  // Returns false if already present.
  bool insert(int tick, int cell) {
    const long long key = static_cast<long long>(tick - first_) * anchors_ + cell;
    if (dense_) {
      if (bits_[static_cast<std::size_t>(key)]) return false;
      bits_[static_cast<std::size_t>(key)] = true;
      return true;
    }
    return sparse_.insert(key).second;
  }

 private:
  int first_;
  int anchors_;
  bool dense_;
  std::vector<bool> bits_;
  std::unordered_set<long long> sparse_;
};

}  // namespace

std::optional<Plan> plan_path(const ConfigSpace& cs, const DistanceField& dist, Anchor start, int start_tick,
                              const ReservationTable& table, int t_max) {
  const Anchor goal = dist.goal();
  if (!cs.is_valid(start) || !cs.is_valid(goal)) return std::nullopt;
  if (!dist.reachable(start)) return std::nullopt;
  if (start_tick + dist.at(start) > t_max) return std::nullopt;
  const int rho = cs.rho();
  if (table.footprint_blocked(start, rho, start_tick)) return std::nullopt;

  const int last_goal_use = table.last_occupied_tick(goal, rho);
  if (last_goal_use == ReservationTable::kForever) return std::nullopt;
  const int static_from = std::max(start_tick, table.horizon() + 1);
  const int collapse_at = std::min(static_from, t_max);

  std::vector<SearchNode> nodes;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  ClosedSet closed(start_tick, collapse_at, cs.size());

  nodes.push_back({start, start_tick, 0, -1});
  open.push({start_tick + dist.at(start), dist.at(start), 0, start, 0});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const SearchNode cur = nodes[static_cast<std::size_t>(top.node)];
    if (!closed.insert(std::min(cur.tick, collapse_at), cs.index(cur.anchor))) continue;

    if (cur.anchor == goal && cur.tick > last_goal_use) {
      Plan plan;
      plan.start_tick = start_tick;
      plan.rho = rho;
      plan.goal_hold = true;
      for (int n = top.node; n >= 0; n = nodes[static_cast<std::size_t>(n)].parent)
        plan.anchors.push_back(nodes[static_cast<std::size_t>(n)].anchor);
      std::reverse(plan.anchors.begin(), plan.anchors.end());
      return plan;
    }

    const int next_tick = cur.tick + 1;
    for (int k = 0; k <= 4; ++k) {
      const Anchor nb = k == 4 ? cur.anchor : Anchor{cur.anchor.x + kDx4[k], cur.anchor.y + kDy4[k]};
      if (!cs.is_valid(nb) || !dist.reachable(nb)) continue;
      const int h = dist.at(nb);
      if (next_tick + h > t_max) continue;
      if (table.transition_blocked(cur.anchor, nb, cur.tick, rho)) continue;
      const int waits = cur.waits + (k == 4 ? 1 : 0);
      nodes.push_back({nb, next_tick, waits, top.node});
      open.push({next_tick + h, h, waits, nb, static_cast<int>(nodes.size()) - 1});
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string format_plan_record(int robot_id, const Plan& plan) {
  std::string out = "robot " + std::to_string(robot_id) + " rho " + std::to_string(plan.rho) + " t0 " +
                    std::to_string(plan.start_tick) + " :";
  for (Anchor a : plan.anchors) out += " (" + std::to_string(a.x) + "," + std::to_string(a.y) + ")";
  return out;
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_spaces() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool done() {
    skip_spaces();
    return pos_ >= s_.size();
  }
  void expect(std::string_view word) {
    skip_spaces();
    if (s_.substr(pos_, word.size()) != word)
      throw ParseError("plan record: expected '" + std::string(word) + "' at column " + std::to_string(pos_));
    pos_ += word.size();
  }
  int integer() {
    skip_spaces();
    int v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc{}) throw ParseError("plan record: expected integer at column " + std::to_string(pos_));
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::pair<int, Plan> parse_plan_record(std::string_view line) {
  Cursor c(line);
  c.expect("robot");
  const int id = c.integer();
  Plan plan;
  c.expect("rho");
  plan.rho = c.integer();
  c.expect("t0");
  plan.start_tick = c.integer();
  c.expect(":");
  while (!c.done()) {
    c.expect("(");
    Anchor a;
    a.x = c.integer();
    c.expect(",");
    a.y = c.integer();
    c.expect(")");
    plan.anchors.push_back(a);
  }
  try {
    check_well_formed(plan);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("plan record: ") + e.what());
  }
  return {id, std::move(plan)};
}

}  // namespace pp

#include "pathprospects/prospects.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace pp {

std::vector<Anchor> ForwardSet::anchors() const {
  std::vector<Anchor> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < width * height; ++i)
    if (mask[i]) out.push_back({i % width, i / width});
  return out;
}

ForwardSet forwards_vertices(const ConfigSpace& cs, Anchor v, int t_now, Anchor goal, const DistanceField& dist,
                             int bound) {
  if (!cs.is_valid(v)) throw std::invalid_argument("forward set source is not a valid anchor");
  if (!(dist.goal() == goal) || dist.width() != cs.width())
    throw std::invalid_argument("distance field does not belong to this goal/config space");

  ForwardSet fs;
  fs.source = v;
  fs.source_tick = t_now;
  fs.bound = bound;
  fs.width = cs.width();
  fs.height = cs.height();
  fs.mask.assign(static_cast<std::size_t>(cs.size()), 0);

  auto admitted = [&](Anchor a, int tick) {
    return dist.reachable(a) && static_cast<long long>(tick) + dist.at(a) <= bound;
  };
  if (!admitted(v, t_now)) return fs;

  // Unit edge costs: a FIFO queue pops in nondecreasing arrival tick.
  std::vector<std::pair<int, int>> queue;  // (anchor index, tick)
  queue.reserve(static_cast<std::size_t>(cs.size()));
  std::vector<std::uint8_t> queued(static_cast<std::size_t>(cs.size()), 0);
  queue.emplace_back(cs.index(v), t_now);
  queued[cs.index(v)] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [idx, tick] = queue[head];
    fs.mask[idx] = 1;
    ++fs.count;
    const Anchor a = cs.anchor_at(idx);
    for (int k = 0; k < 4; ++k) {
      const Anchor b{a.x + kDx4[k], a.y + kDy4[k]};
      if (!cs.is_valid(b)) continue;
      const int bi = cs.index(b);
      if (queued[bi] || !admitted(b, tick + 1)) continue;
      queued[bi] = 1;
      queue.emplace_back(bi, tick + 1);
    }
  }
  return fs;
}

std::vector<int> enclosed_effective_obstacles(const ConfigSpace& cs, const ForwardSet& fs) {
  if (fs.width != cs.width() || fs.height != cs.height())
    throw std::invalid_argument("forward set was built on a different config space");
  std::vector<std::uint8_t> outside(fs.mask.size());
  for (std::size_t i = 0; i < outside.size(); ++i) outside[i] = fs.mask[i] ? 0 : 1;
  std::vector<int> labels;
  const int n = label_components8(cs.width(), cs.height(), outside, labels);
  std::vector<std::uint8_t> disqualified(static_cast<std::size_t>(n), 0);
  std::vector<int> obstacle_of(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < cs.size(); ++i) {
    const int l = labels[i];
    if (l < 0) continue;
    const Anchor a = cs.anchor_at(i);
    const bool border = a.x == 0 || a.y == 0 || a.x == cs.width() - 1 || a.y == cs.height() - 1;
    if (border || cs.valid_mask()[i]) disqualified[l] = 1;
    if (!cs.valid_mask()[i]) obstacle_of[l] = cs.effective_labels()[i];
  }
  std::vector<int> out;
  for (int l = 0; l < n; ++l)
    if (!disqualified[l]) out.push_back(obstacle_of[l]);
  return out;
}

ProspectValue path_prospects(const ConfigSpace& cs, const ForwardSet& fs) {
  ProspectValue v;
  v.kappa = static_cast<int>(enclosed_effective_obstacles(cs, fs).size());
  v.prospects = std::ldexp(1.0, v.kappa);
  return v;
}

int homology_class_oracle(const ConfigSpace& cs, Anchor s, Anchor g, int length_bound,
                          const std::vector<Anchor>& representatives, long long budget) {
  if (!cs.is_valid(s) || !cs.is_valid(g)) throw std::invalid_argument("oracle endpoints must be valid anchors");
  const auto& obstacles = cs.effective_obstacles();
  if (obstacles.size() > 64) throw std::invalid_argument("oracle supports at most 64 effective obstacles");
  if (!representatives.empty() && representatives.size() != obstacles.size())
    throw std::invalid_argument("one representative per effective obstacle required");

  const int w = cs.width();
  const int h = cs.height();
  // toggle[y * w + x]: obstacles whose ray is crossed by a horizontal edge spanning
  // columns x..x+1 on row y (ray at the representative's column, strictly below it).
  std::vector<std::uint64_t> toggle(static_cast<std::size_t>(w) * h, 0);
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const Anchor r = representatives.empty() ? obstacles[i].front() : representatives[i];
    if (!cs.in_bounds(r) || cs.is_valid(r) || cs.effective_labels()[cs.index(r)] != static_cast<int>(i))
      throw std::invalid_argument("representative does not belong to its effective obstacle");
    for (int y = r.y + 1; y < h; ++y) toggle[static_cast<std::size_t>(y) * w + r.x] |= std::uint64_t{1} << i;
  }

  const std::vector<int> to_goal = bfs_distances(cs, g);
  if (to_goal[cs.index(s)] > length_bound) return 0;

  std::unordered_set<std::uint64_t> classes;
  std::vector<std::uint8_t> on_path(static_cast<std::size_t>(cs.size()), 0);
  long long steps = 0;

  struct Frame {
    Anchor at;
    std::uint64_t parity;
    int len;
    int next_dir;
  };
  std::vector<Frame> stack{{s, 0, 0, 0}};
  on_path[cs.index(s)] = 1;
  if (s == g) {
    classes.insert(0);
    return 1;
  }
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_dir == 4) {
      on_path[cs.index(f.at)] = 0;
      stack.pop_back();
      continue;
    }
    const int k = f.next_dir++;
    const Anchor b{f.at.x + kDx4[k], f.at.y + kDy4[k]};
    if (!cs.is_valid(b) || on_path[cs.index(b)]) continue;
    const int len = f.len + 1;
    if (to_goal[cs.index(b)] == DistanceField::kUnreachable || len + to_goal[cs.index(b)] > length_bound) continue;
    if (++steps > budget) throw InfeasibleError("homology oracle enumeration budget exceeded");
    std::uint64_t parity = f.parity;
    if (b.y == f.at.y) parity ^= toggle[static_cast<std::size_t>(b.y) * w + std::min(b.x, f.at.x)];
    if (b == g) {
      classes.insert(parity);
      continue;
    }
    on_path[cs.index(b)] = 1;
    stack.push_back({b, parity, len, 0});
  }
  return static_cast<int>(classes.size());
}

std::string render_forward_set(const ConfigSpace& cs, const ForwardSet& fs, Anchor goal) {
  std::vector<std::uint8_t> enclosed(static_cast<std::size_t>(cs.effective_obstacles().size()), 0);
  for (int e : enclosed_effective_obstacles(cs, fs)) enclosed[static_cast<std::size_t>(e)] = 1;
  std::string out;
  for (int y = 0; y < cs.height(); ++y) {
    for (int x = 0; x < cs.width(); ++x) {
      const Anchor a{x, y};
      const int i = cs.index(a);
      char c = '.';
      if (a == fs.source)
        c = 'S';
      else if (a == goal)
        c = 'G';
      else if (!cs.valid_mask()[i])
        c = enclosed[static_cast<std::size_t>(cs.effective_labels()[i])] ? 'o' : '#';
      else if (fs.mask[i])
        c = '+';
      out.push_back(c);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace pp

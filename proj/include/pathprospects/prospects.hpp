#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathprospects/gridmap.hpp"

namespace pp {

/// Anchors reachable from (source, source_tick) along which the goal can still be reached
/// by tick `bound`. Membership is stored as a mask over the anchor grid.
struct ForwardSet {
  Anchor source;
  int source_tick = 0;
  int bound = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;
  int count = 0;

  bool contains(Anchor a) const {
    return a.x >= 0 && a.y >= 0 && a.x < width && a.y < height && mask[a.y * width + a.x] != 0;
  }
  std::vector<Anchor> anchors() const;
};

/// kappa enclosed effective obstacles give 2^kappa Z2 homology classes.
struct ProspectValue {
  int kappa = 0;
  double prospects = 1.0;
};

/// Forward expansion ordered by arrival tick; a neighbour is admitted only if
/// arrival_tick + true_distance <= bound. Waiting is never expanded since it cannot reach
/// new anchors on the untrimmed graph. `dist` must be the field for `goal`.
ForwardSet forwards_vertices(const ConfigSpace& cs, Anchor v, int t_now, Anchor goal, const DistanceField& dist,
                             int bound);

/// Counts effective obstacles fully surrounded by the forward set: 8-connected components
/// of the complement that hold no valid anchor and do not touch the anchor-grid border.
ProspectValue path_prospects(const ConfigSpace& cs, const ForwardSet& fs);

/// Labels (into cs.effective_obstacles()) of the effective obstacles counted by path_prospects.
std::vector<int> enclosed_effective_obstacles(const ConfigSpace& cs, const ForwardSet& fs);

/// Exhaustive verification oracle: enumerates every simple 4-connected path s -> g of at
/// most `length_bound` moves and counts distinct parity vectors of crossings with a
/// downward ray cast from one representative anchor of every effective obstacle.
/// `representatives` may override the representative per obstacle (same order as
/// cs.effective_obstacles()). Throws InfeasibleError when `budget` DFS steps are exceeded.
int homology_class_oracle(const ConfigSpace& cs, Anchor s, Anchor g, int length_bound,
                          const std::vector<Anchor>& representatives = {}, long long budget = 50'000'000);

/// ASCII overlay: '#' blocked, 'o' enclosed obstacle, '+' forward anchor, '.' other valid,
/// 'S' source, 'G' goal.
std::string render_forward_set(const ConfigSpace& cs, const ForwardSet& fs, Anchor goal);

}  // namespace pp

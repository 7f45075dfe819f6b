#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pp {

/// Raised for malformed maps, scenarios and other user-supplied inputs.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a request cannot be satisfied (map too dense, footprint too large, ...).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an internal invariant is observed to be broken.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Cell coordinate; for a robot, the top-left cell of its footprint.
struct Anchor {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(Anchor, Anchor) = default;
  // Row-major ordering (y first), used for deterministic tie-breaking.
  friend constexpr std::strong_ordering operator<=>(Anchor a, Anchor b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

inline int manhattan(Anchor a, Anchor b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

/// 4-connected motion offsets (right, left, down, up).
inline constexpr int kDx4[4] = {1, -1, 0, 0};
inline constexpr int kDy4[4] = {0, 0, 1, -1};

/// Labels 8-connected components of the cells for which `member` is non-zero.
/// `labels` receives the component index per cell or -1; returns the component count.
int label_components8(int width, int height, const std::vector<std::uint8_t>& member,
                      std::vector<int>& labels);

/// Static workspace: free/obstacle cells plus their 8-connected obstacle components.
class GridMap {
 public:
  GridMap(int width, int height, std::vector<std::uint8_t> obstacle);

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool is_obstacle(int x, int y) const { return obstacle_[index(x, y)] != 0; }
  bool is_free(int x, int y) const { return obstacle_[index(x, y)] == 0; }
  int index(int x, int y) const { return y * width_ + x; }

  const std::vector<std::uint8_t>& obstacle_mask() const { return obstacle_; }
  int obstacle_count() const { return obstacle_count_; }

  /// Original obstacles: component id per cell (-1 on free cells) and member cells.
  const std::vector<int>& component_labels() const { return labels_; }
  const std::vector<std::vector<Anchor>>& obstacle_components() const { return components_; }

  /// True when the free cells form a single 4-connected region.
  bool free_space_connected() const;

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.obstacle_ == b.obstacle_;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> obstacle_;
  int obstacle_count_ = 0;
  std::vector<int> labels_;
  std::vector<std::vector<Anchor>> components_;
};

/// Parses rows of '.' (free) and '#' (obstacle). An optional leading
/// `# grid <width> <height>` header is checked against the rows.
GridMap load_map(std::string_view text);
GridMap load_map_file(const std::string& path);

/// Header line followed by one row per line.
std::string save_map(const GridMap& map);
void save_map_file(const GridMap& map, const std::string& path);

enum class MapKind { Maze, Clutter, Crossing, Corridor, Tunnel };

MapKind parse_map_kind(std::string_view name);
std::string_view to_string(MapKind kind);

/// Generator knobs. Only the fields relevant to the chosen kind are read.
struct MapParams {
  double density = 0.10;   // clutter: fraction of cells turned into obstacles, [0, 0.45]
  int max_block = 3;       // clutter: side of the random blocks cells are drawn from, [1, 8]
  int passage = 2;         // maze/crossing/corridor: free passage width, [1, 6]
  double braid = 0.15;     // maze: fraction of interior walls removed to create loops, [0, 1]
  int block = 6;           // crossing: side of the building blocks between streets, [2, 20]
  int spacing = 5;         // corridor: rows between consecutive walls, [3, 20]
  int gaps = 2;            // corridor/tunnel: openings per wall, [1, 8]
};

/// Deterministic per (kind, size, seed, params); result has one 4-connected free region.
GridMap generate_map(MapKind kind, int width, int height, std::uint64_t seed,
                     const MapParams& params = {});

/// Side length of a square robot footprint.
struct Footprint {
  int rho = 1;
};

/// Per-footprint planning world: anchors whose whole footprint is inside the map
/// and free, and the 8-connected components of blocked anchors (effective obstacles).
class ConfigSpace {
 public:
  ConfigSpace(const GridMap& map, Footprint footprint);

  int rho() const { return rho_; }
  int width() const { return width_; }    // anchor grid width  = map width - rho + 1
  int height() const { return height_; }  // anchor grid height = map height - rho + 1
  int size() const { return width_ * height_; }
  int index(Anchor a) const { return a.y * width_ + a.x; }
  Anchor anchor_at(int idx) const { return {idx % width_, idx / width_}; }
  bool in_bounds(Anchor a) const { return a.x >= 0 && a.y >= 0 && a.x < width_ && a.y < height_; }
  bool is_valid(Anchor a) const { return in_bounds(a) && valid_[index(a)] != 0; }
  int valid_count() const { return valid_count_; }

  const std::vector<std::uint8_t>& valid_mask() const { return valid_; }
  const std::vector<int>& effective_labels() const { return effective_labels_; }
  const std::vector<std::vector<Anchor>>& effective_obstacles() const { return effective_; }

  /// Number of original obstacle components merged into each effective obstacle.
  const std::vector<int>& original_per_effective() const { return original_per_effective_; }
  /// Effective obstacle holding each original obstacle component.
  const std::vector<int>& effective_of_original() const { return effective_of_original_; }

 private:
  int rho_;
  int width_;
  int height_;
  int valid_count_ = 0;
  std::vector<std::uint8_t> valid_;
  std::vector<int> effective_labels_;
  std::vector<std::vector<Anchor>> effective_;
  std::vector<int> original_per_effective_;
  std::vector<int> effective_of_original_;
};

ConfigSpace build_config_space(const GridMap& map, Footprint footprint);

/// Unit-cost 4-connected BFS distances to a goal anchor over valid anchors.
class DistanceField {
 public:
  static constexpr int kUnreachable = std::numeric_limits<int>::max();

  DistanceField(const ConfigSpace& cs, Anchor goal);

  Anchor goal() const { return goal_; }
  int width() const { return width_; }
  int at(Anchor a) const { return values_[a.y * width_ + a.x]; }
  bool reachable(Anchor a) const { return at(a) != kUnreachable; }
  const std::vector<int>& values() const { return values_; }

 private:
  Anchor goal_;
  int width_;
  std::vector<int> values_;
};

DistanceField true_distance_field(const ConfigSpace& cs, Anchor goal);

/// BFS distances from `source` (same semantics as DistanceField, any direction).
std::vector<int> bfs_distances(const ConfigSpace& cs, Anchor source);

}  // namespace pp

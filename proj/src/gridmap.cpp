#include "pathprospects/gridmap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

namespace pp {

int label_components8(int width, int height, const std::vector<std::uint8_t>& member,
                      std::vector<int>& labels) {
  labels.assign(static_cast<std::size_t>(width) * height, -1);
  int count = 0;
  std::vector<int> stack;
  for (int start = 0; start < width * height; ++start) {
    if (!member[start] || labels[start] >= 0) continue;
    labels[start] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      const int cx = cur % width;
      const int cy = cur / width;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = cx + dx;
          const int ny = cy + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
          const int n = ny * width + nx;
          if (member[n] && labels[n] < 0) {
            labels[n] = count;
            stack.push_back(n);
          }
        }
      }
    }
    ++count;
  }
  return count;
}

GridMap::GridMap(int width, int height, std::vector<std::uint8_t> obstacle)
    : width_(width), height_(height), obstacle_(std::move(obstacle)) {
  if (width < 1 || height < 1) throw ParseError("grid dimensions must be positive");
  if (obstacle_.size() != static_cast<std::size_t>(width) * height)
    throw ParseError("obstacle mask size does not match grid dimensions");
  for (auto& c : obstacle_) c = c ? 1 : 0;
  obstacle_count_ = static_cast<int>(std::count(obstacle_.begin(), obstacle_.end(), 1));
  const int n = label_components8(width_, height_, obstacle_, labels_);
  components_.resize(n);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (const int l = labels_[index(x, y)]; l >= 0) components_[l].push_back({x, y});
}

bool GridMap::free_space_connected() const {
  const int total = width_ * height_ - obstacle_count_;
  if (total == 0) return false;
  const auto first = std::find(obstacle_.begin(), obstacle_.end(), 0);
  std::vector<std::uint8_t> seen(obstacle_.size(), 0);
  std::vector<int> stack{static_cast<int>(first - obstacle_.begin())};
  seen[stack.back()] = 1;
  int reached = 0;
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    ++reached;
    const int cx = cur % width_;
    const int cy = cur / width_;
    for (int k = 0; k < 4; ++k) {
      const int nx = cx + kDx4[k];
      const int ny = cy + kDy4[k];
      if (!in_bounds(nx, ny)) continue;
      const int n = index(nx, ny);
      if (!obstacle_[n] && !seen[n]) {
        seen[n] = 1;
        stack.push_back(n);
      }
    }
  }
  return reached == total;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("invalid ") + what + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

GridMap load_map(std::string_view text) {
  auto lines = split_lines(text);
  int header_w = -1;
  int header_h = -1;
  std::size_t first = 0;
  if (!lines.empty() && lines.front().starts_with("# grid")) {
    std::istringstream in{std::string(lines.front().substr(6))};
    std::string w, h, extra;
    if (!(in >> w >> h) || (in >> extra)) throw ParseError("malformed '# grid <width> <height>' header");
    header_w = parse_int(w, "header width");
    header_h = parse_int(h, "header height");
    first = 1;
  }
  if (first >= lines.size()) throw ParseError("map has no rows");
  const int width = static_cast<int>(lines[first].size());
  const int height = static_cast<int>(lines.size() - first);
  if (width == 0) throw ParseError("map row is empty");
  std::vector<std::uint8_t> obstacle;
  obstacle.reserve(static_cast<std::size_t>(width) * height);
  for (std::size_t r = first; r < lines.size(); ++r) {
    if (static_cast<int>(lines[r].size()) != width)
      throw ParseError("ragged map: row " + std::to_string(r - first) + " has " +
                       std::to_string(lines[r].size()) + " cells, expected " + std::to_string(width));
    for (char c : lines[r]) {
      if (c == '.')
        obstacle.push_back(0);
      else if (c == '#')
        obstacle.push_back(1);
      else
        throw ParseError(std::string("illegal map character '") + c + "'");
    }
  }
  if (header_w >= 0 && (header_w != width || header_h != height))
    throw ParseError("map header says " + std::to_string(header_w) + "x" + std::to_string(header_h) +
                     " but rows are " + std::to_string(width) + "x" + std::to_string(height));
  return GridMap(width, height, std::move(obstacle));
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open map file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

std::string save_map(const GridMap& map) {
  std::string out = "# grid " + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(map.width() + 1) * map.height());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) out.push_back(map.is_obstacle(x, y) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

void save_map_file(const GridMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write map file " + path);
  out << save_map(map);
}

MapKind parse_map_kind(std::string_view name) {
  if (name == "maze") return MapKind::Maze;
  if (name == "clutter") return MapKind::Clutter;
  if (name == "crossing") return MapKind::Crossing;
  if (name == "corridor") return MapKind::Corridor;
  if (name == "tunnel") return MapKind::Tunnel;
  throw ParseError("unknown map kind '" + std::string(name) + "'");
}

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Maze: return "maze";
    case MapKind::Clutter: return "clutter";
    case MapKind::Crossing: return "crossing";
    case MapKind::Corridor: return "corridor";
    case MapKind::Tunnel: return "tunnel";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Generators

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct Canvas {
  int width;
  int height;
  std::vector<std::uint8_t> cells;  // 1 = obstacle

  std::uint8_t& at(int x, int y) { return cells[y * width + x]; }
  bool in(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

  void fill_rect(int x0, int y0, int w, int h, std::uint8_t v) {
    for (int y = std::max(0, y0); y < std::min(height, y0 + h); ++y)
      for (int x = std::max(0, x0); x < std::min(width, x0 + w); ++x) at(x, y) = v;
  }

  // 4-connected free-space labels; returns the number of regions.
  int free_regions(std::vector<int>& labels) const {
    labels.assign(cells.size(), -1);
    int count = 0;
    std::vector<int> stack;
    for (int s = 0; s < static_cast<int>(cells.size()); ++s) {
      if (cells[s] || labels[s] >= 0) continue;
      labels[s] = count;
      stack.push_back(s);
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        for (int k = 0; k < 4; ++k) {
          const int nx = cur % width + kDx4[k];
          const int ny = cur / width + kDy4[k];
          if (!in(nx, ny)) continue;
          const int n = ny * width + nx;
          if (!cells[n] && labels[n] < 0) {
            labels[n] = count;
            stack.push_back(n);
          }
        }
      }
      ++count;
    }
    return count;
  }

  // Whether turning free cell (x, y) into an obstacle keeps free space 4-connected.
  bool removal_keeps_connected(int x, int y) {
    at(x, y) = 1;
    std::vector<int> labels;
    const int regions = free_regions(labels);
    at(x, y) = 0;
    return regions == 1;
  }
};

// Joins every free region to the largest one by carving the cheapest obstacle path.
void repair_connectivity(Canvas& canvas, int max_rounds) {
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<int> labels;
    const int regions = canvas.free_regions(labels);
    if (regions == 0) throw InfeasibleError("generated map has no free cells");
    if (regions == 1) return;
    std::vector<int> sizes(regions, 0);
    for (int l : labels)
      if (l >= 0) ++sizes[l];
    const int main = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    // 0-1 BFS from the main region: free cells cost 0, obstacle cells cost 1.
    const int n = canvas.width * canvas.height;
    std::vector<int> cost(n, std::numeric_limits<int>::max());
    std::vector<int> parent(n, -1);
    std::deque<int> dq;
    for (int i = 0; i < n; ++i)
      if (labels[i] == main) {
        cost[i] = 0;
        dq.push_back(i);
      }
    int target = -1;
    while (!dq.empty()) {
      const int cur = dq.front();
      dq.pop_front();
      if (labels[cur] >= 0 && labels[cur] != main) {
        target = cur;
        break;
      }
      for (int k = 0; k < 4; ++k) {
        const int nx = cur % canvas.width + kDx4[k];
        const int ny = cur / canvas.width + kDy4[k];
        if (!canvas.in(nx, ny)) continue;
        const int nb = ny * canvas.width + nx;
        const int w = canvas.cells[nb] ? 1 : 0;
        if (cost[cur] + w < cost[nb]) {
          cost[nb] = cost[cur] + w;
          parent[nb] = cur;
          if (w == 0)
            dq.push_front(nb);
          else
            dq.push_back(nb);
        }
      }
    }
    if (target < 0) throw InfeasibleError("cannot reconnect free space");
    for (int c = target; c >= 0; c = parent[c]) canvas.cells[c] = 0;
  }
  throw InfeasibleError("map connectivity not attainable within repair budget");
}

// Adds exactly `target` obstacle cells drawn from random blocks, never disconnecting free space.
// `allowed` (when non-empty) restricts where cells may be placed.
void scatter_blocks(Canvas& canvas, int target, int max_block, Rng& rng,
                    const std::vector<std::uint8_t>& allowed = {}) {
  int placed = 0;
  const long budget = 200L * std::max(target, 1) + 1000;
  for (long attempt = 0; placed < target && attempt < budget; ++attempt) {
    const int side_w = uniform_int(rng, 1, max_block);
    const int side_h = uniform_int(rng, 1, max_block);
    const int x0 = uniform_int(rng, 0, canvas.width - 1);
    const int y0 = uniform_int(rng, 0, canvas.height - 1);
    for (int y = y0; y < std::min(canvas.height, y0 + side_h) && placed < target; ++y) {
      for (int x = x0; x < std::min(canvas.width, x0 + side_w) && placed < target; ++x) {
        if (canvas.at(x, y)) continue;
        if (!allowed.empty() && !allowed[y * canvas.width + x]) continue;
        if (!canvas.removal_keeps_connected(x, y)) continue;
        canvas.at(x, y) = 1;
        ++placed;
      }
    }
  }
  if (placed < target)
    throw InfeasibleError("could only place " + std::to_string(placed) + " of " + std::to_string(target) +
                          " obstacle cells while keeping free space connected");
}

void require_range(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("map parameter out of range: ") + what);
}

Canvas make_clutter(int w, int h, Rng& rng, const MapParams& p) {
  Canvas c{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};
  const int target = static_cast<int>(std::floor(p.density * w * h));
  scatter_blocks(c, target, p.max_block, rng);
  return c;
}

Canvas make_maze(int w, int h, Rng& rng, const MapParams& p) {
  Canvas c{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 1)};
  const int period = p.passage + 1;
  const int nx = (w + 1) / period;
  const int ny = (h + 1) / period;
  if (nx < 2 || ny < 2) throw InfeasibleError("maze too small for the requested passage width");
  auto room_x = [&](int i) { return i * period; };
  auto room_y = [&](int j) { return j * period; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) c.fill_rect(room_x(i), room_y(j), p.passage, p.passage, 0);

  // Walls between horizontally (dir 0) and vertically (dir 1) adjacent rooms.
  auto open_wall = [&](int i, int j, int dir) {
    if (dir == 0)
      c.fill_rect(room_x(i) + p.passage, room_y(j), 1, p.passage, 0);
    else
      c.fill_rect(room_x(i), room_y(j) + p.passage, p.passage, 1, 0);
  };
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(nx) * ny, 0);
  std::vector<std::uint8_t> opened(static_cast<std::size_t>(nx) * ny * 2, 0);
  std::vector<std::pair<int, int>> stack{{uniform_int(rng, 0, nx - 1), uniform_int(rng, 0, ny - 1)}};
  visited[stack.back().second * nx + stack.back().first] = 1;
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    std::vector<int> dirs;
    for (int k = 0; k < 4; ++k) {
      const int ni = i + kDx4[k];
      const int nj = j + kDy4[k];
      if (ni >= 0 && nj >= 0 && ni < nx && nj < ny && !visited[nj * nx + ni]) dirs.push_back(k);
    }
    if (dirs.empty()) {
      stack.pop_back();
      continue;
    }
    const int k = dirs[uniform_int(rng, 0, static_cast<int>(dirs.size()) - 1)];
    const int ni = i + kDx4[k];
    const int nj = j + kDy4[k];
    const int wi = std::min(i, ni);
    const int wj = std::min(j, nj);
    const int dir = kDx4[k] != 0 ? 0 : 1;
    open_wall(wi, wj, dir);
    opened[(wj * nx + wi) * 2 + dir] = 1;
    visited[nj * nx + ni] = 1;
    stack.emplace_back(ni, nj);
  }
  std::bernoulli_distribution remove(p.braid);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      for (int dir = 0; dir < 2; ++dir) {
        if (dir == 0 && i + 1 >= nx) continue;
        if (dir == 1 && j + 1 >= ny) continue;
        if (opened[(j * nx + i) * 2 + dir]) continue;
        if (remove(rng)) open_wall(i, j, dir);
      }
    }
  }
  return c;
}

Canvas make_crossing(int w, int h, Rng& rng, const MapParams& p) {
  Canvas c{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};
  const int period = p.block + p.passage;
  std::bernoulli_distribution plaza(0.15);
  for (int by = p.passage; by < h; by += period) {
    for (int bx = p.passage; bx < w; bx += period) {
      if (plaza(rng)) continue;
      c.fill_rect(bx, by, p.block, p.block, 1);
    }
  }
  return c;
}

Canvas make_corridor(int w, int h, Rng& rng, const MapParams& p) {
  Canvas c{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};
  for (int y = p.spacing; y < h - 1; y += p.spacing + 1) {
    c.fill_rect(0, y, w, 1, 1);
    for (int g = 0; g < p.gaps; ++g) {
      const int gw = std::min(p.passage, w);
      const int x = uniform_int(rng, 0, w - gw);
      c.fill_rect(x, y, gw, 1, 0);
    }
    // A few stubs hanging off each wall make the rooms less trivial.
    const int stubs = uniform_int(rng, 0, 2);
    for (int s = 0; s < stubs; ++s) {
      const int x = uniform_int(rng, 0, w - 1);
      const int len = uniform_int(rng, 1, std::max(1, p.spacing / 2));
      c.fill_rect(x, y - len, 1, len, 1);
    }
  }
  return c;
}

Canvas make_tunnel(int w, int h, Rng& rng, const MapParams& p) {
  Canvas c{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};
  const int wall_x = w / 3;
  const int wall_w = std::max(2, w / 3);
  c.fill_rect(wall_x, 0, wall_w, h, 1);
  for (int g = 0; g < p.gaps; ++g) {
    const int tw = uniform_int(rng, 1, std::max(1, p.passage));
    const int y = uniform_int(rng, 0, h - tw);
    // Tunnels may jog once halfway through the barrier.
    const int jog = uniform_int(rng, -2, 2);
    const int y2 = std::clamp(y + jog, 0, h - tw);
    const int half = wall_w / 2;
    c.fill_rect(wall_x, y, half, tw, 0);
    c.fill_rect(wall_x + half, y2, wall_w - half, tw, 0);
    c.fill_rect(wall_x + half - 1, std::min(y, y2), 1, std::abs(y2 - y) + tw, 0);
  }
  std::vector<std::uint8_t> open_area(c.cells.size(), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) open_area[y * w + x] = (x < wall_x - 1 || x > wall_x + wall_w) ? 1 : 0;
  repair_connectivity(c, 16);
  const int target = static_cast<int>(std::floor(p.density * 0.5 * w * h));
  scatter_blocks(c, target, std::min(p.max_block, 2), rng, open_area);
  return c;
}

}  // namespace

GridMap generate_map(MapKind kind, int width, int height, std::uint64_t seed, const MapParams& params) {
  if (width < 8 || height < 8) throw std::invalid_argument("generated maps must be at least 8x8");
  require_range(params.density >= 0.0 && params.density <= 0.45, "density in [0, 0.45]");
  require_range(params.max_block >= 1 && params.max_block <= 8, "max_block in [1, 8]");
  require_range(params.passage >= 1 && params.passage <= 6, "passage in [1, 6]");
  require_range(params.braid >= 0.0 && params.braid <= 1.0, "braid in [0, 1]");
  require_range(params.block >= 2 && params.block <= 20, "block in [2, 20]");
  require_range(params.spacing >= 3 && params.spacing <= 20, "spacing in [3, 20]");
  require_range(params.gaps >= 1 && params.gaps <= 8, "gaps in [1, 8]");

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(kind), static_cast<std::uint32_t>(width),
                    static_cast<std::uint32_t>(height)};
  Rng rng(seq);
  Canvas canvas = [&] {
    switch (kind) {
      case MapKind::Clutter: return make_clutter(width, height, rng, params);
      case MapKind::Maze: return make_maze(width, height, rng, params);
      case MapKind::Crossing: return make_crossing(width, height, rng, params);
      case MapKind::Corridor: return make_corridor(width, height, rng, params);
      case MapKind::Tunnel: return make_tunnel(width, height, rng, params);
    }
    throw std::invalid_argument("unknown map kind");
  }();
  repair_connectivity(canvas, 64);
  return GridMap(width, height, std::move(canvas.cells));
}

// ---------------------------------------------------------------------------
// Configuration space

ConfigSpace::ConfigSpace(const GridMap& map, Footprint footprint) : rho_(footprint.rho) {
  if (rho_ < 1) throw std::invalid_argument("footprint side must be positive");
  if (rho_ > std::min(map.width(), map.height()))
    throw InfeasibleError("footprint " + std::to_string(rho_) + " larger than map " +
                          std::to_string(map.width()) + "x" + std::to_string(map.height()));
  width_ = map.width() - rho_ + 1;
  height_ = map.height() - rho_ + 1;

  // Summed-area table of obstacle cells.
  const int mw = map.width() + 1;
  std::vector<int> sat(static_cast<std::size_t>(mw) * (map.height() + 1), 0);
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x)
      sat[(y + 1) * mw + x + 1] =
          (map.is_obstacle(x, y) ? 1 : 0) + sat[y * mw + x + 1] + sat[(y + 1) * mw + x] - sat[y * mw + x];

  valid_.assign(static_cast<std::size_t>(width_) * height_, 0);
  std::vector<std::uint8_t> blocked(valid_.size(), 0);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const int x1 = x + rho_;
      const int y1 = y + rho_;
      const int hits = sat[y1 * mw + x1] - sat[y * mw + x1] - sat[y1 * mw + x] + sat[y * mw + x];
      const int i = y * width_ + x;
      valid_[i] = hits == 0 ? 1 : 0;
      blocked[i] = hits == 0 ? 0 : 1;
      valid_count_ += valid_[i];
    }
  }
  const int n = label_components8(width_, height_, blocked, effective_labels_);
  effective_.resize(n);
  for (int i = 0; i < size(); ++i)
    if (effective_labels_[i] >= 0) effective_[effective_labels_[i]].push_back(anchor_at(i));

  original_per_effective_.assign(n, 0);
  for (const auto& comp : map.obstacle_components()) {
    const Anchor c = comp.front();
    const Anchor covering{std::min(c.x, width_ - 1), std::min(c.y, height_ - 1)};
    const int e = effective_labels_[index(covering)];
    effective_of_original_.push_back(e);
    ++original_per_effective_[e];
  }
}

ConfigSpace build_config_space(const GridMap& map, Footprint footprint) { return ConfigSpace(map, footprint); }

std::vector<int> bfs_distances(const ConfigSpace& cs, Anchor source) {
  std::vector<int> dist(cs.size(), DistanceField::kUnreachable);
  if (!cs.is_valid(source)) return dist;
  std::vector<int> queue;
  queue.reserve(cs.size());
  dist[cs.index(source)] = 0;
  queue.push_back(cs.index(source));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int cur = queue[head];
    const Anchor a = cs.anchor_at(cur);
    for (int k = 0; k < 4; ++k) {
      const Anchor b{a.x + kDx4[k], a.y + kDy4[k]};
      if (!cs.is_valid(b)) continue;
      const int bi = cs.index(b);
      if (dist[bi] != DistanceField::kUnreachable) continue;
      dist[bi] = dist[cur] + 1;
      queue.push_back(bi);
    }
  }
  return dist;
}

DistanceField::DistanceField(const ConfigSpace& cs, Anchor goal) : goal_(goal), width_(cs.width()) {
  if (!cs.is_valid(goal))
    throw InfeasibleError("goal anchor (" + std::to_string(goal.x) + "," + std::to_string(goal.y) +
                          ") is blocked for footprint " + std::to_string(cs.rho()));
  values_ = bfs_distances(cs, goal);
}

DistanceField true_distance_field(const ConfigSpace& cs, Anchor goal) { return DistanceField(cs, goal); }

}  // namespace pp

#include <doctest.h>

#include <cmath>
#include <set>

#include "pathprospects/gridmap.hpp"
#include "test_support.hpp"

using namespace pp;

TEST_CASE("load_map counts obstacle cells and 8-connected components") {
  SUBCASE("empty") {
    const GridMap m = load_map("...\n...\n...\n");
    CHECK(m.width() == 3);
    CHECK(m.height() == 3);
    CHECK(m.obstacle_count() == 0);
    CHECK(m.obstacle_components().empty());
  }
  SUBCASE("single centre cell") {
    const GridMap m = load_map("...\n.#.\n...\n");
    CHECK(m.obstacle_count() == 1);
    REQUIRE(m.obstacle_components().size() == 1);
    CHECK(m.obstacle_components()[0] == std::vector<Anchor>{{1, 1}});
  }
  SUBCASE("diagonal neighbours join") {
    const GridMap m = load_map("#..\n.#.\n...\n");
    CHECK(m.obstacle_count() == 2);
    CHECK(m.obstacle_components().size() == 1);
  }
  SUBCASE("separated cells stay apart") {
    const GridMap m = load_map("#.#\n...\n#.#\n");
    CHECK(m.obstacle_components().size() == 4);
  }
}

TEST_CASE("load_map rejects malformed input") {
  CHECK_THROWS_AS(load_map(""), ParseError);
  CHECK_THROWS_AS(load_map("...\n..\n"), ParseError);
  CHECK_THROWS_AS(load_map("..x\n...\n"), ParseError);
  CHECK_THROWS_AS(load_map("# grid 4 2\n...\n...\n"), ParseError);
}

TEST_CASE("save_map round-trips") {
  const GridMap m = oracle::random_map(17, 11, 0.3, 5);
  const std::string text = save_map(m);
  CHECK(text.rfind("# grid 17 11\n", 0) == 0);
  const GridMap back = load_map(text);
  CHECK(back == m);
  CHECK(back.obstacle_components().size() == m.obstacle_components().size());
}

TEST_CASE("obstacle components partition the obstacle cells") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GridMap m = oracle::random_map(15, 12, 0.35, seed);
    std::set<std::pair<int, int>> seen;
    for (std::size_t c = 0; c < m.obstacle_components().size(); ++c) {
      for (Anchor a : m.obstacle_components()[c]) {
        CHECK(m.is_obstacle(a.x, a.y));
        CHECK(m.component_labels()[static_cast<std::size_t>(m.index(a.x, a.y))] == static_cast<int>(c));
        CHECK(seen.insert({a.x, a.y}).second);
      }
    }
    CHECK(static_cast<int>(seen.size()) == m.obstacle_count());
  }
}

TEST_CASE("clutter generation places the requested cells and stays connected") {
  MapParams p;
  p.density = 0.10;
  const GridMap m = generate_map(MapKind::Clutter, 75, 75, 7, p);
  CHECK(m.obstacle_count() == static_cast<int>(std::floor(0.10 * 75 * 75)));

  // Flood fill over free cells from any free cell reaches every free cell.
  const auto free_cells = oracle::valid_anchors(m, 1);
  REQUIRE_FALSE(free_cells.empty());
  const auto d = oracle::distances(m, 1, free_cells.front());
  for (Anchor a : free_cells) CHECK(d[static_cast<std::size_t>(a.y * 75 + a.x)] != INT_MAX);
  CHECK(m.free_space_connected());
}

TEST_CASE("generate_map is deterministic and connected for every kind") {
  for (MapKind kind : {MapKind::Maze, MapKind::Clutter, MapKind::Crossing, MapKind::Corridor, MapKind::Tunnel}) {
    CAPTURE(to_string(kind));
    const GridMap a = generate_map(kind, 40, 30, 11);
    const GridMap b = generate_map(kind, 40, 30, 11);
    CHECK(a == b);
    CHECK(a.free_space_connected());
    CHECK(parse_map_kind(to_string(kind)) == kind);
  }
  MapParams none;
  none.density = 0.0;
  CHECK(generate_map(MapKind::Clutter, 20, 20, 3, none).obstacle_count() == 0);
  CHECK_THROWS(generate_map(MapKind::Clutter, 5, 20, 3));
  CHECK_THROWS_AS(parse_map_kind("swamp"), ParseError);
}

TEST_CASE("config space erosion on small fixtures") {
  SUBCASE("empty 5x5 with a 2x2 footprint") {
    const GridMap m = load_map(".....\n.....\n.....\n.....\n.....\n");
    const ConfigSpace cs(m, {2});
    CHECK(cs.width() == 4);
    CHECK(cs.height() == 4);
    CHECK(cs.valid_count() == 16);
    CHECK(cs.effective_obstacles().empty());
  }
  SUBCASE("one obstacle cell blocks the four anchors covering it") {
    const GridMap m = load_map(".....\n.....\n..#..\n.....\n.....\n");
    const ConfigSpace cs(m, {2});
    CHECK(cs.valid_count() == 12);
    std::vector<Anchor> blocked;
    for (int i = 0; i < cs.size(); ++i)
      if (!cs.valid_mask()[static_cast<std::size_t>(i)]) blocked.push_back(cs.anchor_at(i));
    CHECK(blocked == std::vector<Anchor>{{1, 1}, {2, 1}, {1, 2}, {2, 2}});
    CHECK(cs.effective_obstacles().size() == 1);
  }
  SUBCASE("footprint larger than the map") {
    const GridMap m = load_map("...\n...\n");
    CHECK_THROWS_AS(ConfigSpace(m, {3}), InfeasibleError);
    CHECK_THROWS(ConfigSpace(m, {0}));
  }
}

TEST_CASE("blocks one cell apart merge once the footprint cannot pass between them") {
  const GridMap m = load_map(
      "..........\n"
      "..........\n"
      "..##.##...\n"
      "..##.##...\n"
      "..........\n"
      "..........\n");
  const ConfigSpace small(m, {1});
  const ConfigSpace large(m, {2});
  CHECK(small.effective_obstacles().size() == 2);
  CHECK(large.effective_obstacles().size() == 1);
  CHECK(large.original_per_effective() == std::vector<int>{2});
  CHECK(large.effective_of_original() == std::vector<int>{0, 0});
}

TEST_CASE("config space matches the cell-level validity oracle") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const GridMap m = oracle::random_map(14, 10, 0.15 + 0.01 * static_cast<double>(seed % 10), seed);
    for (int rho = 1; rho <= 4; ++rho) {
      const ConfigSpace cs(m, {rho});
      int valid = 0;
      for (int y = 0; y < cs.height(); ++y)
        for (int x = 0; x < cs.width(); ++x) {
          const bool v = oracle::valid(m, {x, y}, rho);
          valid += v ? 1 : 0;
          CHECK(cs.is_valid({x, y}) == v);
        }
      CHECK(cs.valid_count() == valid);
      CHECK(static_cast<int>(cs.effective_obstacles().size()) == oracle::effective_obstacle_count(m, rho));
    }
  }
}

TEST_CASE("effective obstacles partition the blocked anchors") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const GridMap m = oracle::random_map(16, 16, 0.2, seed);
    const ConfigSpace cs(m, {2});
    std::vector<int> hits(static_cast<std::size_t>(cs.size()), 0);
    for (std::size_t c = 0; c < cs.effective_obstacles().size(); ++c)
      for (Anchor a : cs.effective_obstacles()[c]) {
        ++hits[static_cast<std::size_t>(cs.index(a))];
        CHECK(cs.effective_labels()[static_cast<std::size_t>(cs.index(a))] == static_cast<int>(c));
      }
    for (int i = 0; i < cs.size(); ++i) CHECK(hits[static_cast<std::size_t>(i)] == (cs.valid_mask()[i] ? 0 : 1));
    // Rebuilding gives the same labelling.
    const ConfigSpace again(m, {2});
    CHECK(again.effective_labels() == cs.effective_labels());
  }
}

TEST_CASE("erosion consistency and monotone merging over random maps") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const GridMap m = oracle::random_map(20, 20, 0.05 + 0.005 * static_cast<double>(seed), seed * 7 + 1);
    std::size_t previous = SIZE_MAX;
    for (int rho = 1; rho <= 5; ++rho) {
      const ConfigSpace cs(m, {rho});
      CHECK(cs.effective_obstacles().size() <= previous);
      previous = cs.effective_obstacles().size();
      if (rho == 1) continue;
      const ConfigSpace finer(m, {rho - 1});
      for (int y = 0; y < cs.height(); ++y)
        for (int x = 0; x < cs.width(); ++x)
          if (cs.is_valid({x, y})) CHECK(finer.is_valid({x, y}));
    }
  }
}

TEST_CASE("distance field basics") {
  const GridMap m = load_map("...\n...\n...\n");
  const ConfigSpace cs(m, {1});
  const DistanceField d(cs, {2, 2});
  CHECK(d.at({2, 2}) == 0);
  CHECK(d.at({0, 0}) == 4);
  CHECK(d.goal() == Anchor{2, 2});

  const GridMap walled = load_map(".#.\n.#.\n.#.\n");
  const ConfigSpace wcs(walled, {1});
  const DistanceField wd(wcs, {2, 0});
  CHECK_FALSE(wd.reachable({0, 0}));
  CHECK_THROWS(DistanceField(wcs, {1, 1}));
}

TEST_CASE("distance field around a U-shaped wall matches BFS") {
  const GridMap m = load_map(
      "..........\n"
      "..######..\n"
      ".......#..\n"
      ".......#..\n"
      "..######..\n"
      "..........\n");
  const ConfigSpace cs(m, {1});
  const DistanceField d(cs, {4, 2});
  const auto ref = oracle::distances(m, 1, {4, 2});
  for (int i = 0; i < cs.size(); ++i) CHECK(d.values()[static_cast<std::size_t>(i)] == ref[static_cast<std::size_t>(i)]);
  CHECK(d.at({9, 2}) == 15);  // up 2, left 8, down 2, right 3
}

TEST_CASE("distance fields agree with BFS and are locally consistent") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const GridMap m = oracle::random_map(18, 13, 0.25, seed + 500);
    for (int rho = 1; rho <= 3; ++rho) {
      const auto anchors = oracle::valid_anchors(m, rho);
      if (anchors.empty()) continue;
      const Anchor goal = anchors[seed % anchors.size()];
      const ConfigSpace cs(m, {rho});
      const DistanceField d(cs, goal);
      const auto ref = oracle::distances(m, rho, goal);
      CHECK(d.values() == ref);
      CHECK(bfs_distances(cs, goal) == ref);
      for (Anchor a : anchors) {
        if (!d.reachable(a) || a == goal) continue;
        int best = DistanceField::kUnreachable;
        for (int k = 0; k < 4; ++k) {
          const Anchor b{a.x + kDx4[k], a.y + kDy4[k]};
          if (!cs.is_valid(b)) continue;
          CHECK(std::abs(d.at(a) - d.at(b)) <= 1);
          best = std::min(best, d.at(b));
        }
        CHECK(d.at(a) == best + 1);
      }
    }
  }
}

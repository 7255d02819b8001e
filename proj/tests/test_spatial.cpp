#include "doctest.h"
#include "support.hpp"

#include "flowmesher/error.hpp"
#include "flowmesher/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

using namespace flowmesher;

namespace {

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::set<int> all_items(const UniformGrid& g, std::span<const Vec3> pts) {
  std::set<int> out;
  for (const Vec3& p : pts) {
    if (const auto* items = g.items(g.cell_of(p))) out.insert(items->begin(), items->end());
  }
  return out;
}

}  // namespace

TEST_SUITE("spatial") {

TEST_CASE("cell arithmetic") {
  UniformGrid g(1.0, Dimension::Solid3D);
  CHECK(g.cell_of({0, 0, 0}) == CellIndex{0, 0, 0});
  UniformGrid g2(2.0, Dimension::Solid3D);
  CHECK(g2.cell_of({2.5, 0, 0}) == CellIndex{1, 0, 0});
  CHECK(g2.cell_of({-0.1, 0, 0}) == CellIndex{-1, 0, 0});
  UniformGrid flat(1.0, Dimension::Planar2D);
  CHECK(flat.cell_of({0.5, 0.5, 7.0}).z == 0);
}

TEST_CASE("build stores every item exactly once") {
  std::mt19937_64 rng(5);
  std::vector<Vec3> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back(testing::random_in(rng, {-10, -10, -10}, {10, 10, 10}));
  const UniformGrid g = UniformGrid::build(pts, 1.7, Dimension::Solid3D);
  CHECK(g.size() == 1000);
  std::multiset<int> seen;
  std::set<std::tuple<long long, long long, long long>> cells;
  for (const Vec3& p : pts) {
    const CellIndex c = g.cell_of(p);
    cells.insert({c.x, c.y, c.z});
  }
  for (const auto& [x, y, z] : cells) {
    for (int id : *g.items({x, y, z})) seen.insert(id);
  }
  CHECK(seen.size() == 1000);
  CHECK(as_set(std::vector<int>(seen.begin(), seen.end())).size() == 1000);
}

TEST_CASE("neighbors: near pairs found, far pairs not") {
  const double h = 1.0;
  UniformGrid g(2 * h, Dimension::Planar2D);
  g.insert(0, {0.05, 0.05, 0});
  g.insert(1, {0.05 + 1.9 * h, 0.05, 0});
  CHECK(as_set(g.neighbors({0.05, 0.05, 0})).count(1) == 1);
  CHECK(as_set(g.neighbors({0.05 + 1.9 * h, 0.05, 0})).count(0) == 1);
  UniformGrid far(2 * h, Dimension::Planar2D);
  far.insert(0, {0.05, 0.05, 0});
  far.insert(1, {0.05 + 4.1 * h, 0.05, 0});
  CHECK(as_set(far.neighbors({0.05, 0.05, 0})).count(1) == 0);
  CHECK(UniformGrid(1.0, Dimension::Solid3D).neighbors({0, 0, 0}).empty());
}

TEST_CASE("neighbors superset and subset bounds against brute force") {
  std::mt19937_64 rng(17);
  for (Dimension dim : {Dimension::Planar2D, Dimension::Solid3D}) {
    for (int trial = 0; trial < 20; ++trial) {
      const double cell = 0.5 + trial * 0.1;
      std::vector<Vec3> pts;
      for (int i = 0; i < 500; ++i) {
        Vec3 p = testing::random_in(rng, {-5, -5, -5}, {5, 5, 5});
        if (dim == Dimension::Planar2D) p.z() = 0;
        pts.push_back(p);
      }
      const UniformGrid g = UniformGrid::build(pts, cell, dim);
      for (int q = 0; q < 20; ++q) {
        Vec3 x = testing::random_in(rng, {-5, -5, -5}, {5, 5, 5});
        if (dim == Dimension::Planar2D) x.z() = 0;
        const std::set<int> got = as_set(g.neighbors(x));
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const double d = (pts[i] - x).norm();
          if (d <= cell) CHECK(got.count(static_cast<int>(i)) == 1);
          if (got.count(static_cast<int>(i))) CHECK(d <= 2 * std::sqrt(3.0) * cell);
        }
      }
    }
  }
}

TEST_CASE("ring shells partition the block") {
  std::mt19937_64 rng(23);
  std::vector<Vec3> pts;
  for (int i = 0; i < 400; ++i) pts.push_back(testing::random_in(rng, {-6, -6, -6}, {6, 6, 6}));
  const UniformGrid g = UniformGrid::build(pts, 1.0, Dimension::Solid3D);
  const Vec3 x(0.3, -0.2, 0.7);
  std::vector<int> shells, one;
  for (int r = 0; r <= 2; ++r) {
    g.ring(x, r, one);
    shells.insert(shells.end(), one.begin(), one.end());
  }
  std::vector<int> block;
  g.neighbors(x, block, 2);
  std::sort(shells.begin(), shells.end());
  std::sort(block.begin(), block.end());
  CHECK(shells == block);
}

TEST_CASE("relocate within and across cells") {
  UniformGrid g(1.0, Dimension::Solid3D);
  g.insert(3, {0.2, 0.2, 0.2});
  g.relocate(3, {0.2, 0.2, 0.2}, {0.7, 0.2, 0.2});
  CHECK(g.items({0, 0, 0})->size() == 1);
  g.relocate(3, {0.7, 0.2, 0.2}, {1.3, 0.2, 0.2});
  CHECK(g.items({0, 0, 0}) == nullptr);
  REQUIRE(g.items({1, 0, 0}) != nullptr);
  CHECK(g.items({1, 0, 0})->size() == 1);
  CHECK(g.size() == 1);
  CHECK_THROWS_AS(g.remove(3, {0.2, 0.2, 0.2}), ConsistencyError);
}

TEST_CASE("random relocations match a fresh build") {
  std::mt19937_64 rng(29);
  std::vector<Vec3> pts;
  for (int i = 0; i < 300; ++i) pts.push_back(testing::random_in(rng, {-4, -4, -4}, {4, 4, 4}));
  UniformGrid g = UniformGrid::build(pts, 0.9, Dimension::Solid3D);
  std::normal_distribution<double> step(0.0, 0.6);
  std::uniform_int_distribution<int> pick(0, 299);
  for (int k = 0; k < 5000; ++k) {
    const int i = pick(rng);
    const Vec3 to = pts[i] + Vec3(step(rng), step(rng), step(rng));
    g.relocate(i, pts[i], to);
    pts[i] = to;
  }
  const UniformGrid fresh = UniformGrid::build(pts, 0.9, Dimension::Solid3D);
  for (const Vec3& p : pts) {
    const auto* a = g.items(g.cell_of(p));
    const auto* b = fresh.items(fresh.cell_of(p));
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(as_set(*a) == as_set(*b));
  }
  CHECK(all_items(g, pts).size() == 300);
}

}  // TEST_SUITE

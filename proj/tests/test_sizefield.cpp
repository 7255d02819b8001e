#include "doctest.h"
#include "support.hpp"

#include "flowmesher/error.hpp"
#include "flowmesher/sizefield.hpp"

#include <cmath>
#include <random>

using namespace flowmesher;

namespace {

/// Barycentric interpolation in the brute-force Delaunay triangle (empty
/// circumcircle over all point triples) that contains x.
double brute_force_interpolate(const std::vector<Anchor>& pts, const Vec3& x) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Vec3 &a = pts[i].point, &b = pts[j].point, &c = pts[k].point;
        const double area = signed_area_xy(a, b, c);
        if (std::abs(area) < 1e-9) continue;
        const double l0 = signed_area_xy(x, b, c) / area;
        const double l1 = signed_area_xy(a, x, c) / area;
        const double l2 = signed_area_xy(a, b, x) / area;
        if (l0 < -1e-12 || l1 < -1e-12 || l2 < -1e-12) continue;
        // Circumcentre test against all other points.
        const double d = 2 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) + c.x() * (a.y() - b.y()));
        const double ux = (a.squaredNorm() * (b.y() - c.y()) + b.squaredNorm() * (c.y() - a.y()) +
                           c.squaredNorm() * (a.y() - b.y())) / d;
        const double uy = (a.squaredNorm() * (c.x() - b.x()) + b.squaredNorm() * (a.x() - c.x()) +
                           c.squaredNorm() * (b.x() - a.x())) / d;
        const Vec3 centre(ux, uy, 0);
        const double r = (a - centre).norm();
        bool empty = true;
        for (std::size_t m = 0; m < n && empty; ++m) {
          if (m == i || m == j || m == k) continue;
          empty = (pts[m].point - centre).norm() > r * (1 - 1e-12);
        }
        if (empty) return l0 * pts[i].size + l1 * pts[j].size + l2 * pts[k].size;
      }
  return -1;
}

}  // namespace

TEST_SUITE("sizefield") {

TEST_CASE("uniform field") {
  const SizeField f = SizeField::uniform(10);
  CHECK(f.size_at({3, -7, 1}) == 10.0);
  CHECK(f.pair_size({0, 0, 0}, {100, 0, 0}) == 10.0);
  CHECK(f.h_min() == 10.0);
  CHECK_THROWS_AS(SizeField::uniform(0), InputError);
}

TEST_CASE("radial law") {
  const SizeField f = SizeField::radial(RadialLinear{});
  CHECK(f.size_at({0, 0, -20}) == doctest::Approx(25.0));
  CHECK(f.size_at({40, 0, 5}) == doctest::Approx(15.0));
  CHECK(f.size_at({0, 17.5, 0}) == doctest::Approx(20.0));  // (1 - 0.4 * 0.5) * 25
  CHECK(f.h_min() == doctest::Approx(15.0));
  CHECK(f.h_max() == doctest::Approx(25.0));
}

TEST_CASE("pair size is the symmetric mean") {
  const SizeField f = SizeField::radial(RadialLinear{.r = 20.0, .inner_radius = 10.0, .falloff = 0.5});
  const Vec3 a(0, 0, 0), b(10, 0, 0);  // sizes 20 and 10
  CHECK(f.pair_size(a, b) == doctest::Approx(15.0));
  CHECK(f.pair_size(a, b) == f.pair_size(b, a));
}

TEST_CASE("single anchor gives a constant discrete field") {
  const MeshDomain d = testing::rectangle(100, 50);
  const SizeField f = build_discrete(d, std::vector<Anchor>{{{50, 25, 0}, 10.0}});
  const auto& g = std::get<DiscreteGrid>(f.variant());
  for (double v : g.values) CHECK(v == 10.0);
}

TEST_CASE("cell holding an anchor takes its size") {
  const MeshDomain d = testing::rectangle(100, 50);
  const std::vector<Anchor> anchors{{{50, 25, 0}, 20.0}, {{0, 0, 0}, 10.0}, {{100, 50, 0}, 10.0}};
  const SizeField f = build_discrete(d, anchors);
  CHECK(f.size_at({50, 25, 0}) == 20.0);
  CHECK(f.size_at({0, 0, 0}) == 10.0);
  CHECK(f.h_min() == 10.0);
}

TEST_CASE("cell sizes match barycentric interpolation in a brute-force background mesh") {
  const MeshDomain d = testing::rectangle(100, 50);
  const std::vector<Anchor> anchors{{{50, 25, 0}, 20.0}, {{20, 10, 0}, 12.0}, {{80, 40, 0}, 15.0}};
  const SizeField f = build_discrete(d, anchors);
  const auto& g = std::get<DiscreteGrid>(f.variant());
  // Box grown by the largest anchor size, corners at h_min.
  std::vector<Anchor> background = anchors;
  for (const Vec3& c : {Vec3(-20, -20, 0), Vec3(120, -20, 0), Vec3(120, 70, 0), Vec3(-20, 70, 0)}) {
    background.push_back({c, 12.0});
  }
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long long> ix(0, g.dims[0] - 1), iy(0, g.dims[1] - 1);
  int checked = 0;
  for (int s = 0; s < 300; ++s) {
    const long long i = ix(rng), j = iy(rng);
    const Vec3 centre = g.lower + Vec3((i + 0.5) * g.cell, (j + 0.5) * g.cell, 0);
    bool holds_anchor = false;
    for (const auto& a : anchors) {
      holds_anchor |= std::floor((a.point.x() - g.lower.x()) / g.cell) == i &&
                      std::floor((a.point.y() - g.lower.y()) / g.cell) == j;
    }
    if (holds_anchor) continue;
    const double expect = brute_force_interpolate(background, centre);
    REQUIRE(expect > 0);
    CHECK(f.size_at(centre) == doctest::Approx(expect).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 250);
}

TEST_CASE("conflicting duplicate anchors are rejected") {
  const MeshDomain d = testing::rectangle(10, 10);
  const std::vector<Anchor> anchors{{{5, 5, 0}, 2.0}, {{5, 5, 0}, 3.0}};
  CHECK_THROWS_AS(build_discrete(d, anchors), InputError);
}

}  // TEST_SUITE

#include "doctest.h"
#include "support.hpp"

#include "flowmesher/delaunay.hpp"
#include "flowmesher/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>

using namespace flowmesher;

namespace {

/// Circumcentre from the perpendicular-bisector equations.
Vec3 circumcentre(std::span<const Vec3> p) {
  if (p.size() == 3) {
    Eigen::Matrix2d a;
    Eigen::Vector2d b;
    for (int k = 0; k < 2; ++k) {
      const Vec3 d = p[k + 1] - p[0];
      a.row(k) << 2 * d.x(), 2 * d.y();
      b[k] = d.x() * d.x() + d.y() * d.y();
    }
    const Eigen::Vector2d c = a.fullPivLu().solve(b);
    return p[0] + Vec3(c.x(), c.y(), 0);
  }
  Eigen::Matrix3d a;
  Eigen::Vector3d b;
  for (int k = 0; k < 3; ++k) {
    const Vec3 d = p[k + 1] - p[0];
    a.row(k) = 2 * d.transpose();
    b[k] = d.squaredNorm();
  }
  return p[0] + a.fullPivLu().solve(b);
}

/// Number of (element, point) pairs violating the empty-circumsphere property.
int violations(const SimplexMesh& m, std::span<const Vec3> pts) {
  int bad = 0;
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    const auto el = m.element(e);
    std::vector<Vec3> v;
    for (int i : el) v.push_back(m.nodes[i]);
    const Vec3 c = circumcentre(v);
    const double r = (v[0] - c).norm();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::find(el.begin(), el.end(), static_cast<int>(i)) != el.end()) continue;
      if ((pts[i] - c).norm() < r * (1 - 1e-10)) ++bad;
    }
  }
  return bad;
}

double hull_area(std::vector<Vec3> p) {
  std::sort(p.begin(), p.end(), [](const Vec3& a, const Vec3& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  std::vector<Vec3> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && signed_area_xy(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && signed_area_xy(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  double a = 0;
  for (std::size_t i = 1; i + 1 < k - 1; ++i) a += signed_area_xy(h[0], h[i], h[i + 1]);
  return a;
}

}  // namespace

TEST_SUITE("delaunay") {

TEST_CASE("square corners give two triangles") {
  const std::vector<Vec3> p{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  const SimplexMesh m = delaunay(p, Dimension::Planar2D);
  CHECK(m.num_elements() == 2);
  CHECK(m.edges.size() == 5);
  for (std::size_t e = 0; e < 2; ++e) {
    const auto el = m.element(e);
    CHECK(signed_area_xy(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]]) > 0);
  }
}

TEST_CASE("nodes keep input order") {
  std::mt19937_64 rng(2);
  std::vector<Vec3> p;
  for (int i = 0; i < 30; ++i) p.push_back(testing::random_in(rng, {0, 0, 0}, {1, 1, 1}));
  const SimplexMesh m = delaunay(p, Dimension::Solid3D);
  REQUIRE(m.nodes.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(m.nodes[i] == p[i]);
}

TEST_CASE("degenerate input") {
  const std::vector<Vec3> line{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(delaunay(line, Dimension::Planar2D), DegenerateInputError);
  const std::vector<Vec3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.2, 0}};
  CHECK_THROWS_AS(delaunay(flat, Dimension::Solid3D), DegenerateInputError);
  CHECK_THROWS_AS(delaunay(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}}, Dimension::Planar2D), DegenerateInputError);
}

TEST_CASE("2D empty circumcircle and hull coverage on random instances") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> size(3, 200);
  for (int inst = 0; inst < 50; ++inst) {
    std::vector<Vec3> p;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      Vec3 q = testing::random_in(rng, {0, 0, 0}, {1, 1, 0});
      p.push_back(q);
    }
    const SimplexMesh m = delaunay(p, Dimension::Planar2D);
    CHECK(violations(m, p) == 0);
    double area = 0;
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
      const auto el = m.element(e);
      const double a = signed_area_xy(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]]);
      CHECK(a > 0);
      area += a;
    }
    CHECK(area == doctest::Approx(hull_area(p)).epsilon(1e-9));
  }
}

TEST_CASE("3D empty circumsphere on random instances") {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> size(4, 200);
  for (int inst = 0; inst < 50; ++inst) {
    std::vector<Vec3> p;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) p.push_back(testing::random_in(rng, {0, 0, 0}, {1, 1, 1}));
    const SimplexMesh m = delaunay(p, Dimension::Solid3D);
    CHECK(violations(m, p) == 0);
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
      const auto el = m.element(e);
      CHECK(signed_volume(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]], m.nodes[el[3]]) > 0);
    }
  }
}

TEST_CASE("cospherical lattice points") {
  // A cubic lattice is maximally degenerate for insphere tests.
  std::vector<Vec3> p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) p.emplace_back(i, j, k);
  const SimplexMesh m = delaunay(p, Dimension::Solid3D);
  double vol = 0;
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    const auto el = m.element(e);
    vol += signed_volume(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]], m.nodes[el[3]]);
  }
  CHECK(vol == doctest::Approx(27.0));
  CHECK(violations(m, p) == 0);
}

TEST_CASE("cocircular grid points") {
  std::vector<Vec3> p;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 5; ++j) p.emplace_back(i, j, 0);
  const SimplexMesh m = delaunay(p, Dimension::Planar2D);
  CHECK(m.num_elements() == 2 * 6 * 4);
  double area = 0;
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    const auto el = m.element(e);
    area += signed_area_xy(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]]);
  }
  CHECK(area == doctest::Approx(24.0));
  CHECK(violations(m, p) == 0);
}

}  // TEST_SUITE

#include "doctest.h"
#include "support.hpp"

#include "flowmesher/domain.hpp"
#include "flowmesher/error.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace flowmesher;
using testing::domain_from;

TEST_SUITE("domain") {

TEST_CASE("unit square measures") {
  const MeshDomain d = testing::unit_square();
  CHECK(d.dimension == Dimension::Planar2D);
  CHECK(d.area == doctest::Approx(1.0));
  CHECK(d.boundary_length == doctest::Approx(4.0));
  CHECK(d.boundary_edges.size() == 4);
}

TEST_CASE("gridded rectangle measures") {
  const MeshDomain d = load_obj(testing::data_dir() / "rectangle.obj");
  CHECK(d.area == doctest::Approx(5000.0));
  CHECK(d.boundary_length == doctest::Approx(300.0));
}

TEST_CASE("tilted planar domain maps to z = 0 and back") {
  // Unit square in the plane x = z.
  const MeshDomain d = domain_from("v 0 0 0\nv 1 0 1\nv 1 1 1\nv 0 1 0\nf 1 2 3\nf 1 3 4\n");
  CHECK(d.is_planar());
  for (const Vec3& v : d.vertices) CHECK(v.z() == 0.0);
  CHECK(d.area == doctest::Approx(std::sqrt(2.0)));
  const Vec3 back = d.frame.to_input(d.vertices[1]);
  CHECK((back - Vec3(1, 0, 1)).norm() < 1e-12);
}

TEST_CASE("quad face is rejected") {
  std::istringstream in("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  CHECK_THROWS_AS(parse_obj(in), UnsupportedFaceError);
}

TEST_CASE("face index out of range reports the line") {
  std::istringstream in("v 0 0 0\nv 1 0 0\nv 1 1 0\nf 1 2 7\n");
  try {
    parse_obj(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("face tokens with texture and normal indices, negative indices") {
  std::istringstream in("v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nf 1/1/1 2//1 -1\n");
  const ObjMesh m = parse_obj(in);
  REQUIRE(m.triangles.size() == 1);
  CHECK(m.triangles[0] == std::array<int, 3>{0, 1, 2});
  CHECK(!m.warnings.empty());
}

TEST_CASE("open surface is not a valid solid") {
  // Cube with one face missing.
  std::string obj =
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nv 0 0 1\nv 1 0 1\nv 0 1 1\nv 1 1 1\n"
      "f 1 3 4\nf 1 4 2\nf 5 6 8\nf 5 8 7\nf 1 2 6\nf 1 6 5\nf 3 7 8\nf 3 8 4\nf 1 5 7\nf 1 7 3\n";
  CHECK_THROWS_AS(domain_from(obj), TopologyError);
}

TEST_CASE("cube orientation, volume and normals") {
  const MeshDomain d = testing::box(1, 1, 1);
  CHECK(d.dimension == Dimension::Solid3D);
  CHECK(d.volume == doctest::Approx(1.0));
  CHECK(d.surface_area == doctest::Approx(6.0));
  for (std::size_t t = 0; t < d.triangles.size(); ++t) {
    const Vec3 c = (d.vertices[d.triangles[t][0]] + d.vertices[d.triangles[t][1]] + d.vertices[d.triangles[t][2]]) / 3;
    CHECK(d.face_normals[t].dot(c - Vec3(0.5, 0.5, 0.5)) > 0);  // outward
  }
  // Corner vertex normal is along the diagonal.
  for (std::size_t v = 0; v < d.vertices.size(); ++v) {
    const Vec3 expect = (d.vertices[v] - Vec3(0.5, 0.5, 0.5)).normalized();
    CHECK((d.vertex_normals[v] - expect).norm() < 1e-12);
  }
}

TEST_CASE("inverted input surface is reoriented") {
  std::string obj =
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
      "f 1 2 3\nf 1 4 2\nf 1 3 4\nf 2 4 3\n";  // all faces inward
  const MeshDomain d = domain_from(obj);
  CHECK(d.volume == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("2D edge and vertex normals") {
  const MeshDomain d = testing::unit_square();
  for (std::size_t e = 0; e < d.boundary_edges.size(); ++e) {
    const Vec3 a = d.vertices[d.boundary_edges[e][0]];
    const Vec3 b = d.vertices[d.boundary_edges[e][1]];
    if (a.y() == 0 && b.y() == 0) CHECK((d.edge_normals[e] - Vec3(0, -1, 0)).norm() < 1e-15);
  }
  for (std::size_t v = 0; v < d.vertices.size(); ++v) {
    const Vec3 expect = (d.vertices[v] - Vec3(0.5, 0.5, 0)).normalized();
    CHECK((d.vertex_normals[v] - expect).norm() < 1e-12);
  }
}

TEST_CASE("coplanar faces share their normal with the edge between them") {
  const MeshDomain d = testing::box(2, 1, 1);
  for (std::size_t e = 0; e < d.edge_faces.size(); ++e) {
    const auto [f0, f1] = d.edge_faces[e];
    if ((d.face_normals[f0] - d.face_normals[f1]).norm() < 1e-12) {
      CHECK((d.edge_normals[e] - d.face_normals[f0]).norm() < 1e-12);
    }
  }
}

TEST_CASE("augmentation count") {
  CHECK(augmentation_count(9.0, 1.0) == 2);  // ceil(9/4 - 1)
  CHECK(augmentation_count(3.0, 1.0) == 0);
  CHECK(augmentation_count(4.0, 1.0) == 0);
  CHECK(augmentation_count(4.5, 1.0) == 1);
}

TEST_CASE("2D augmentation spacing on an edge of length 9h") {
  MeshDomain d = testing::rectangle(9, 1);
  augment_boundary(d, 1.0);
  int on_bottom = 0;
  for (const auto& a : d.augmented_vertices) {
    if (a.point.y() == 0.0) {
      ++on_bottom;
      const double t = a.point.x() / 9.0;
      CHECK((std::abs(t - 1.0 / 3) < 1e-12 || std::abs(t - 2.0 / 3) < 1e-12));
    }
  }
  CHECK(on_bottom == 2);
}

TEST_CASE("3D augmentation covers an equilateral face") {
  const double h = 1.0, s = 12.0;
  const Vec3 a(0, 0, 0), b(s, 0, 0), c(s / 2, s * std::sqrt(3.0) / 2, 0), apex(s / 2, s * std::sqrt(3.0) / 6, s);
  std::ostringstream obj;
  for (const Vec3& p : {a, b, c, apex}) obj << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  obj << "f 1 3 2\nf 1 2 4\nf 2 3 4\nf 3 1 4\n";
  MeshDomain d = domain_from(obj.str());
  augment_boundary(d, h);

  std::vector<Vec3> pts(d.vertices.begin(), d.vertices.end());
  for (const auto& av : d.augmented_vertices) pts.push_back(av.point);
  // Points on the base face.
  std::vector<Vec3> base;
  for (const Vec3& p : pts) {
    if (std::abs(p.z()) < 1e-9) {
      const Vec3 bc = Vec3(p.x(), p.y(), 0);
      const double area = triangle_area(a, b, c);
      const double sum = triangle_area(bc, b, c) + triangle_area(a, bc, c) + triangle_area(a, b, bc);
      CHECK(sum == doctest::Approx(area).epsilon(1e-9));  // inside or on the triangle
      base.push_back(p);
    }
  }
  // Every point of the face is within 2 sqrt(2) h of some boundary vertex.
  const int n = 60;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const Vec3 q = a + (b - a) * (double(i) / n) + (c - a) * (double(j) / n);
      double best = 1e300;
      for (const Vec3& p : base) best = std::min(best, (p - q).norm());
      CHECK(best <= 2 * std::sqrt(2.0) * h);
    }
}

TEST_CASE("welding merges duplicated vertices") {
  const MeshDomain d = domain_from("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 4 5 6\n");
  CHECK(d.vertices.size() == 4);
  CHECK(d.boundary_edges.size() == 4);
}

}  // TEST_SUITE

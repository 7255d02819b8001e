#include "doctest.h"
#include "support.hpp"

#include "flowmesher/error.hpp"
#include "flowmesher/mesh_io.hpp"

#include <random>
#include <sstream>
#include <string>

using namespace flowmesher;

namespace {

int count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
  return n;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("mesh_io") {

TEST_CASE("planar OBJ has one v per node and one f per triangle") {
  SimplexMesh m;
  m.dimension = Dimension::Planar2D;
  m.nodes = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  m.connectivity = {0, 1, 2, 0, 2, 3};
  m.sync_flags();
  std::ostringstream out;
  write_obj(out, m);
  CHECK(count_prefix(out.str(), "v ") == 4);
  CHECK(count_prefix(out.str(), "f ") == 2);
  std::istringstream in(out.str());
  const SimplexMesh back = read_obj_mesh(in);
  CHECK(back.nodes == m.nodes);
  CHECK(back.connectivity == m.connectivity);
}

TEST_CASE("OBJ output returns to the input frame") {
  const MeshDomain d = testing::domain_from("v 0 0 5\nv 2 0 5\nv 2 1 5\nv 0 1 5\nf 1 2 3\nf 1 3 4\n");
  SimplexMesh m;
  m.dimension = Dimension::Planar2D;
  for (const Vec3& p : d.vertices) m.nodes.push_back(p);
  m.connectivity = {0, 1, 2};
  m.sync_flags();
  std::ostringstream out;
  write_obj(out, m, d.frame);
  std::istringstream in(out.str());
  const SimplexMesh back = read_obj_mesh(in);
  for (const Vec3& p : back.nodes) CHECK(p.z() == doctest::Approx(5.0));
}

TEST_CASE("node/ele round trip is exact") {
  std::mt19937_64 rng(5);
  SimplexMesh m;
  m.dimension = Dimension::Solid3D;
  for (int i = 0; i < 20; ++i) m.nodes.push_back(testing::random_in(rng, {-1e3, -1, 0}, {1e3, 1, 1e-6}));
  for (int e = 0; e < 10; ++e)
    for (int k = 0; k < 4; ++k) m.connectivity.push_back((e + 3 * k) % 20);
  m.sync_flags();
  m.boundary[3] = m.boundary[7] = 1;
  std::ostringstream node, ele;
  write_node(node, m);
  write_ele(ele, m);
  std::istringstream node_in(node.str()), ele_in(ele.str());
  const SimplexMesh back = read_node_ele(node_in, ele_in);
  CHECK(back.nodes == m.nodes);
  CHECK(back.connectivity == m.connectivity);
  CHECK(back.boundary == m.boundary);
}

TEST_CASE("single tetrahedron files") {
  SimplexMesh m;
  m.dimension = Dimension::Solid3D;
  m.nodes = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  m.connectivity = {0, 1, 2, 3};
  m.sync_flags();
  std::ostringstream node, ele;
  write_node(node, m);
  write_ele(ele, m);
  const auto nl = lines_of(node.str());
  CHECK(nl.front() == "4 3 0 1");
  CHECK(nl.size() == 5);
  CHECK(lines_of(ele.str()) == std::vector<std::string>{"1 4 0", "1 1 2 3 4"});
}

TEST_CASE("malformed node/ele input") {
  std::istringstream node("2 3 0 1\n1 0 0 0 1\n2 1 0 0 0\n"), ele("1 4 0\n1 1 2 3 4\n");
  CHECK_THROWS_AS(read_node_ele(node, ele), ParseError);
  std::istringstream short_node("3 3 0 1\n1 0 0 0 1\n"), any("0 4 0\n");
  CHECK_THROWS_AS(read_node_ele(short_node, any), ParseError);
}

TEST_CASE("metrics end with the wall time") {
  std::ostringstream out;
  write_metrics(out, RunMetrics{.nodes = 10, .elements = 12, .converged = true, .wall_time = 1.25});
  const auto l = lines_of(out.str());
  REQUIRE(!l.empty());
  CHECK(l.front() == "N_nodes 10");
  CHECK(l.back() == "wall_time_s 1.250");
  CHECK(std::find(l.begin(), l.end(), "converged 1") != l.end());
}

TEST_CASE("report CSV has a header and one row per 5 degree bin") {
  QualityReport r;
  r.histogram[12] = 7;
  std::ostringstream out;
  write_report_csv(out, r);
  const auto l = lines_of(out.str());
  REQUIRE(l.size() == 37);
  CHECK(l[0] == "bin_start,bin_end,count");
  CHECK(l[13] == "60,65,7");
  CHECK(l[36] == "175,180,0");
}

TEST_CASE("unwritable path raises IoError") {
  SimplexMesh m;
  CHECK_THROWS_AS(write_obj(std::filesystem::path("/nonexistent-dir/x/mesh.obj"), m), IoError);
}

}  // TEST_SUITE

#include "doctest.h"
#include "support.hpp"

#include "flowmesher/error.hpp"
#include "flowmesher/pipeline.hpp"

#include <fstream>
#include <sstream>

using namespace flowmesher;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("flowmesher-test-" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("same seed gives identical outputs") {
  RunConfig cfg;
  cfg.input = testing::data_dir() / "lshape.obj";
  cfg.h = 10;
  cfg.fixed = {{Vec3(10, -10, 0), std::nullopt}};
  cfg.flow.seed = 11;
  std::string first[3];
  for (int run = 0; run < 2; ++run) {
    cfg.output_dir = scratch("det" + std::to_string(run));
    const RunResult r = run_pipeline(cfg);
    write_outputs(cfg, r);
    const std::string obj = slurp(cfg.output_dir / "mesh.obj");
    const std::string csv = slurp(cfg.output_dir / "report.csv");
    std::string metrics = slurp(cfg.output_dir / "metrics.txt");
    metrics.erase(metrics.rfind("wall_time_s"));
    if (run == 0) {
      first[0] = obj;
      first[1] = csv;
      first[2] = metrics;
    } else {
      CHECK(obj == first[0]);
      CHECK(csv == first[1]);
      CHECK(metrics == first[2]);
    }
    std::filesystem::remove_all(cfg.output_dir);
  }
  CHECK(("\n" + first[0]).find("\nv 10 -10 0\n") != std::string::npos);
}

TEST_CASE("missing input") {
  RunConfig cfg;
  cfg.input = testing::data_dir() / "no-such-file.obj";
  cfg.h = 10;
  CHECK_THROWS_AS(run_pipeline(cfg), IoError);
}

TEST_CASE("size field selection") {
  const MeshDomain d = testing::rectangle(100, 50);
  RunConfig cfg;
  CHECK_THROWS_AS(make_size_field(cfg, d), InputError);
  cfg.h = 10;
  CHECK(std::holds_alternative<double>(make_size_field(cfg, d).variant()));
  cfg.anchors = {{Vec3(50, 25, 0), 20.0}};
  const SizeField f = make_size_field(cfg, d);
  CHECK(f.size_at({50, 25, 0}) == 20.0);
  CHECK(f.size_at({0, 0, 0}) == 10.0);  // boundary vertices take h
  cfg.radial = RadialLinear{};
  CHECK_THROWS_AS(make_size_field(cfg, d), InputError);
  cfg.anchors.clear();
  cfg.h.reset();
  CHECK(std::holds_alternative<RadialLinear>(make_size_field(cfg, d).variant()));
  cfg.fixed = {{Vec3(10, 10, 0), 4.0}};  // a sized fixed node is an anchor too
  CHECK_THROWS_AS(make_size_field(cfg, d), InputError);
}

}  // TEST_SUITE

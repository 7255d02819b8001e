#include "flowmesher/pipeline.hpp"

#include "flowmesher/delaunay.hpp"
#include "flowmesher/error.hpp"
#include "flowmesher/mesh_io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <fstream>
#include <iostream>

namespace flowmesher {

SizeField make_size_field(const RunConfig& config, const MeshDomain& domain) {
  std::vector<Anchor> anchors;
  auto to_sim = [&](Vec3 p) {
    p = domain.frame.to_simulation(p);
    if (domain.is_planar()) p.z() = 0.0;
    return p;
  };
  for (const auto& a : config.anchors) anchors.push_back({to_sim(a.point), a.size});
  for (const auto& f : config.fixed) {
    if (f.size) anchors.push_back({to_sim(f.point), *f.size});
  }

  if (config.radial) {
    if (!anchors.empty()) throw InputError("a radial size law cannot be combined with anchors");
    return SizeField::radial(*config.radial);
  }
  if (anchors.empty()) {
    if (!config.h) throw InputError("no size field given: set h, anchors or a radial law");
    return SizeField::uniform(*config.h);
  }
  if (config.h) {
    if (!(*config.h > 0.0)) throw InputError("target edge length must be positive");
    const std::size_t explicit_count = anchors.size();
    for (std::size_t v = 0; v < domain.vertices.size(); ++v) {
      if (!domain.on_boundary[v]) continue;
      const Vec3& p = domain.vertices[v];
      bool taken = false;
      for (std::size_t k = 0; k < explicit_count; ++k) taken = taken || anchors[k].point == p;
      if (!taken) anchors.push_back({p, *config.h});
    }
  }
  return build_discrete(domain, anchors);
}

RunResult run_pipeline(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (!std::filesystem::is_regular_file(config.input)) {
    throw IoError("input file not found: " + config.input.string());
  }
  RunResult r;
  r.domain = load_obj(config.input);
  std::ostream* log = config.verbose ? &std::cout : nullptr;
  if (log) {
    fmt::print(*log, "domain: {} vertices, {} triangles, {}\n", r.domain.vertices.size(),
               r.domain.triangles.size(), r.domain.is_planar() ? "planar" : "solid");
  }
  r.field = make_size_field(config, r.domain);
  augment_boundary(r.domain, r.field.h_min());
  const BoundaryIndex index(r.domain, r.field.h_min());

  std::vector<Vec3> fixed;
  for (const auto& f : config.fixed) {
    Vec3 p = r.domain.frame.to_simulation(f.point);
    if (r.domain.is_planar()) p.z() = 0.0;
    fixed.push_back(p);
  }

  FlowConfig fc = config.flow;
  fc.log = log;
  FlowSimulation sim(index, r.field, fc, fixed);
  if (log) {
    fmt::print(*log, "h_min {}  sources {}  initial N_total {}\n", r.field.h_min(), sim.sources().size(),
               sim.n_total());
  }
  r.flow = sim.run();

  SimplexMesh mesh = delaunay(r.flow.positions, r.domain.dimension);
  mesh.boundary = r.flow.boundary;
  mesh.fixed = r.flow.fixed;
  mesh = filter_to_domain(mesh, index);
  r.converged = r.flow.converged;

  if (!r.domain.is_planar() && config.postopt) {
    r.post = hybrid_optimize(mesh, r.field, index, config.post);
    mesh = r.post->mesh;
    r.converged = r.converged && r.post->converged;
    if (log) {
      fmt::print(*log,
                 "post-optimization: {} after {} iterations, {} poor tets left ({} unremovable), "
                 "{} boundary slivers dropped\n",
                 r.post->converged ? "converged" : "not converged", r.post->outer_iterations, r.post->poor_tets,
                 r.post->unremovable_tets, r.post->dropped_slivers);
    }
  }
  r.mesh = std::move(mesh);
  r.report = quality_report(r.mesh, r.field);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void write_outputs(const RunConfig& config, const RunResult& r) {
  std::filesystem::create_directories(config.output_dir);
  const auto& dir = config.output_dir;
  if (r.domain.is_planar()) {
    write_obj(dir / "mesh.obj", r.mesh, r.domain.frame);
  } else {
    write_node_ele(dir / "mesh.node", dir / "mesh.ele", r.mesh);
  }
  {
    std::ofstream out(dir / "report.csv", std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / "report.csv").string());
    write_report_csv(out, r.report);
  }
  RunMetrics m;
  m.nodes = r.mesh.nodes.size();
  m.elements = r.mesh.num_elements();
  m.e_avg = r.report.e_avg;
  m.min_angle = r.report.min_angle;
  m.max_angle = r.report.max_angle;
  m.min_quality = r.report.min_quality;
  m.converged = r.converged;
  m.wall_time = r.wall_time;
  std::ofstream out(dir / "metrics.txt", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "metrics.txt").string());
  write_metrics(out, m);
}

}  // namespace flowmesher

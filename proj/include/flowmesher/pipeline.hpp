#pragma once

#include "flowmesher/flow.hpp"
#include "flowmesher/postopt.hpp"
#include "flowmesher/sizefield.hpp"
#include "flowmesher/triangulate.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace flowmesher {

struct FixedNode {
  Vec3 point;
  std::optional<double> size;  // local target size, adds an anchor
};

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir = ".";

  /// Uniform target size. With anchors present it is applied at every
  /// boundary vertex of the domain instead.
  std::optional<double> h;
  std::optional<RadialLinear> radial;
  std::vector<Anchor> anchors;  // input frame
  std::vector<FixedNode> fixed;  // input frame

  FlowConfig flow;
  bool postopt = true;
  // A full run keeps unremovable tets and reports non-convergence instead
  // of discarding the mesh.
  PostoptConfig post{.on_unremovable = PostoptConfig::Unremovable::Keep};
  bool verbose = false;
};

struct RunResult {
  MeshDomain domain;
  SizeField field;
  SimplexMesh mesh;  // simulation frame
  QualityReport report;
  FlowResult flow;
  std::optional<PostoptResult> post;
  bool converged = false;
  double wall_time = 0.0;
};

/// Builds the size field described by the config for a loaded domain.
SizeField make_size_field(const RunConfig& config, const MeshDomain& domain);

/// load -> augment -> flow -> triangulate -> filter -> post-opt -> report.
RunResult run_pipeline(const RunConfig& config);

/// Writes mesh.obj (2D) or mesh.node/mesh.ele (3D), report.csv and
/// metrics.txt into config.output_dir.
void write_outputs(const RunConfig& config, const RunResult& result);

}  // namespace flowmesher

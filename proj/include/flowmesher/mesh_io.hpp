#pragma once

#include "flowmesher/domain.hpp"
#include "flowmesher/mesh.hpp"
#include "flowmesher/triangulate.hpp"

#include <filesystem>
#include <iosfwd>

namespace flowmesher {

/// Planar mesh as OBJ `v`/`f` records, nodes mapped back to the input frame.
void write_obj(std::ostream& out, const SimplexMesh& mesh, const PlaneFrame& frame = {});
void write_obj(const std::filesystem::path& path, const SimplexMesh& mesh, const PlaneFrame& frame = {});

/// Solid mesh as `.node` ("N 3 0 1", rows "i x y z boundary") and `.ele`
/// ("M 4 0", rows "i a b c d"), 1-based.
void write_node(std::ostream& out, const SimplexMesh& mesh);
void write_ele(std::ostream& out, const SimplexMesh& mesh);
void write_node_ele(const std::filesystem::path& node_path, const std::filesystem::path& ele_path,
                    const SimplexMesh& mesh);

/// Reads a `.node`/`.ele` pair back. Boundary markers become node flags.
SimplexMesh read_node_ele(std::istream& node, std::istream& ele);
SimplexMesh read_node_ele(const std::filesystem::path& node_path, const std::filesystem::path& ele_path);

/// Reads a planar OBJ mesh (z ignored for connectivity orientation).
SimplexMesh read_obj_mesh(std::istream& in);

/// Histogram rows "bin_start,bin_end,count".
void write_report_csv(std::ostream& out, const QualityReport& report);

struct RunMetrics {
  std::size_t nodes = 0;
  std::size_t elements = 0;
  double e_avg = 0.0;
  double min_angle = 0.0;
  double max_angle = 0.0;
  double min_quality = 1.0;
  bool converged = false;
  double wall_time = 0.0;
};

/// "key value" lines; wall time is the last line.
void write_metrics(std::ostream& out, const RunMetrics& metrics);

}  // namespace flowmesher

#pragma once

#include "flowmesher/containment.hpp"
#include "flowmesher/mesh.hpp"
#include "flowmesher/sizefield.hpp"

#include <vector>

namespace flowmesher {

/// Indices of elements that are not numerically flat (area above
/// 1e-12 h^2, volume above 1e-12 h^3 with h = index.h_min()) and whose
/// centroid does not lie outside the domain.
std::vector<int> inside_elements(const SimplexMesh& mesh, const BoundaryIndex& index);

/// Copy of `mesh` with only the listed elements. With `compact`, nodes that
/// are no longer referenced are dropped and indices renumbered.
SimplexMesh select_elements(const SimplexMesh& mesh, std::span<const int> keep, bool compact);

/// Removes elements whose centroid lies outside the domain and elements that
/// are numerically flat (area below 1e-12 h^2, volume below 1e-12 h^3 with
/// h = index.h_min()), then drops unreferenced nodes. Node flags follow their
/// nodes. Throws FilterError when nothing survives.
SimplexMesh filter_to_domain(const SimplexMesh& mesh, const BoundaryIndex& index);

/// delaunay() of the points followed by filter_to_domain().
SimplexMesh triangulate(std::span<const Vec3> points, const BoundaryIndex& index);

/// Signed mean of (L - h) / h over unique edges, h the pair size of the
/// edge's endpoints. Throws InputError for a mesh without edges.
double edge_length_error(const SimplexMesh& mesh, const SizeField& field);

struct QualityReport {
  static constexpr double kBinWidth = 5.0;
  static constexpr int kBins = 36;

  Dimension dimension = Dimension::Planar2D;
  std::size_t nodes = 0;
  std::size_t elements = 0;
  std::size_t edges = 0;
  double e_avg = 0.0;
  /// Triangle angles (2D) or tetrahedron dihedral angles (3D), degrees.
  std::vector<double> angles;
  std::array<std::size_t, kBins> histogram{};
  double min_angle = 0.0;
  double max_angle = 0.0;
  /// Minimum tetrahedron quality; 1 for planar meshes.
  double min_quality = 1.0;

  /// Fraction of angles in the closed interval [lo, hi] degrees.
  double fraction_in(double lo, double hi) const;
  std::size_t count_below(double deg) const;
  std::size_t count_above(double deg) const;
};

QualityReport quality_report(const SimplexMesh& mesh, const SizeField& field);

}  // namespace flowmesher

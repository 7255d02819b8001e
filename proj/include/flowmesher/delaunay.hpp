#pragma once

#include "flowmesher/mesh.hpp"

#include <span>

namespace flowmesher {

/// Delaunay triangulation (2D, z ignored) or tetrahedralization (3D) of a
/// point set by incremental Bowyer-Watson insertion into a super-simplex.
///
/// Nodes of the result are the input points in input order. Exact duplicates
/// are left unreferenced. Throws DegenerateInputError when fewer than
/// 3 (2D) / 4 (3D) points are given or all points are collinear/coplanar.
SimplexMesh delaunay(std::span<const Vec3> points, Dimension dimension);

}  // namespace flowmesher

#pragma once

#include "flowmesher/geometry.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace flowmesher {

/// Nodes plus triangle (2D) or tetrahedron (3D) connectivity.
///
/// Connectivity is stored flat with a stride of 3 or 4. Triangles are
/// counterclockwise in the xy-plane and tetrahedra have positive signed
/// volume. `edges` lists every undirected edge once, smaller index first.
struct SimplexMesh {
  Dimension dimension = Dimension::Planar2D;
  std::vector<Vec3> nodes;
  std::vector<std::uint8_t> boundary;  // per node
  std::vector<std::uint8_t> fixed;     // per node
  std::vector<int> connectivity;
  std::vector<std::array<int, 2>> edges;

  int stride() const { return dimension == Dimension::Planar2D ? 3 : 4; }
  std::size_t num_elements() const { return connectivity.size() / stride(); }
  std::span<const int> element(std::size_t e) const {
    return {connectivity.data() + e * stride(), static_cast<std::size_t>(stride())};
  }
  Vec3 centroid(std::size_t e) const;

  /// Resizes the node flag arrays to match `nodes`, keeping existing values.
  void sync_flags();
  void rebuild_edges();
};

}  // namespace flowmesher

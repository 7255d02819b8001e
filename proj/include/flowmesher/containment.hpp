#pragma once

#include "flowmesher/domain.hpp"
#include "flowmesher/spatial.hpp"

#include <optional>

namespace flowmesher {

enum class Side { Inside, Outside, OnBoundary };

/// Closest boundary point to a query and the normal of the feature it lies on.
struct Projection {
  Vec3 point;
  Vec3 normal;
  ElementRef element;
  double distance = 0.0;
};

/// v - 2 (v . n) n.
inline Vec3 reflect_velocity(const Vec3& v, const Vec3& n) { return v - 2.0 * v.dot(n) * n; }

/// Boundary vertices (original and augmented) of a domain indexed in a
/// uniform grid with cell size 2 h_min, plus the projection and inside/outside
/// tests built on it. Holds a reference to the domain, which must outlive it.
class BoundaryIndex {
 public:
  BoundaryIndex(const MeshDomain& domain, double h_min);

  const MeshDomain& domain() const { return *domain_; }
  const UniformGrid& grid() const { return grid_; }
  double h_min() const { return h_min_; }
  std::span<const Vec3> points() const { return points_; }

  /// Closest point among the boundary elements adjacent to boundary vertices
  /// within `rings` cells of x. Empty when no boundary vertex is that close.
  std::optional<Projection> try_project(const Vec3& x, int rings) const;

  /// try_project with the simulation search block; throws SearchRadiusError
  /// when no boundary vertex is found.
  Projection project(const Vec3& x) const;

  /// Closest boundary point anywhere, expanding the search until the nearest
  /// element is guaranteed to have been seen.
  Projection locate(const Vec3& x) const;

  Side classify(const Vec3& x, const Projection& proj) const;

  /// classify(x, locate(x)).
  Side side_of(const Vec3& x) const { return classify(x, locate(x)); }

  /// Moves an escaped point onto the boundary and reflects its velocity.
  /// Points with no boundary vertex in the search block are deep inside and
  /// left alone. Returns true when the point was moved.
  bool enforce(Vec3& x, Vec3& v) const;

  /// Rings of grid cells searched by project() and enforce().
  static constexpr int kSearchRings = 2;

 private:
  Projection closest_over(const Vec3& x, std::span<const int> vertex_ids) const;

  const MeshDomain* domain_;
  double h_min_;
  std::vector<Vec3> points_;
  std::vector<ElementRef> owners_;  // Vertex for original vertices, else augmented owner
  UniformGrid grid_;
};

}  // namespace flowmesher

#pragma once

#include "flowmesher/containment.hpp"
#include "flowmesher/mesh.hpp"
#include "flowmesher/sizefield.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace flowmesher {

/// 6 sqrt(6) V / (L_max S): 1 for the regular tetrahedron, 0 when flat.
double tet_quality(const std::array<Vec3, 4>& t);

/// Local indices (into the tet) of the edges opposite the two largest
/// dihedral angles: {{a, c}, {b, d}}. Ties go to the lower edge index.
std::array<std::array<int, 2>, 2> largest_dihedral_edges(const std::array<Vec3, 4>& t);

struct PostoptConfig {
  double mass = 1.0;
  double k_s = 0.1;
  double k_v = 0.08;
  double dt = 0.5;
  double t_total = 100.0;
  double poor_q = 0.3;
  double mid_q = 0.5;
  double move_tol = 0.05;  // fraction of h_min
  int max_outer = 100;
  int max_removal = 10;
  /// Poor tets whose four vertices are all fixed cannot be projected. Those
  /// with volume at most sliver_volume times the regular tet on their
  /// longest edge are flat boundary slivers and are left out of the mesh.
  /// Any other one raises UnremovableTetError, or with Keep stays in the
  /// mesh and the run is reported as not converged.
  enum class Unremovable { Throw, Keep };
  Unremovable on_unremovable = Unremovable::Throw;
  double sliver_volume = 0.01;
  /// A projection is skipped when it would shrink the shortest edge of its
  /// tet below collapse_guard h_min (or below its current length, if that is
  /// already shorter).
  double collapse_guard = 0.3;
};

struct PhaseResult {
  bool converged = false;
  int iterations = 0;
  double mean_displacement = 0.0;
};

/// Spring force on every free node of `mesh` (edges pulled or pushed toward
/// the pair size) plus the opposite-edge force on tets with q in
/// [poor_q, mid_q]. Exposed for tests.
std::vector<Vec3> spring_forces(const SimplexMesh& mesh, const SizeField& field, const PostoptConfig& cfg);

/// Mass-spring relaxation of the free nodes of `mesh` (fixed = boundary or
/// user-fixed). Mobile nodes leaving the domain are projected back when an
/// index is given.
PhaseResult mass_spring_optimize(SimplexMesh& mesh, const SizeField& field, const PostoptConfig& cfg,
                                 const BoundaryIndex* index = nullptr);

struct ProjectionPass {
  double mean_displacement = 0.0;
  std::size_t poor = 0;
  std::vector<int> unremovable;  // element indices with no free vertex
  std::size_t skipped = 0;       // projections rejected by the collapse guard
};

/// One projection pass over tets with q < poor_q, flattening each onto a
/// plane chosen by its number of free vertices. Moves mesh.nodes in place.
/// Without h_min the collapse guard is relative to the tet's shortest edge.
ProjectionPass project_poor_tets(SimplexMesh& mesh, const PostoptConfig& cfg, double h_min = 0.0);

struct RemovalResult : PhaseResult {
  std::size_t poor = 0;         // q < poor_q tets left in the final triangulation
  std::size_t unremovable = 0;  // of those, tets without a free vertex
  std::size_t dropped = 0;      // boundary slivers left out of the mesh
};

/// Alternates retriangulation and project_poor_tets until nothing moves
/// (at most cfg.max_removal rounds). `mesh` is replaced by the last
/// triangulation; node indices are preserved (no compaction).
RemovalResult remove_poor_tets(SimplexMesh& mesh, const BoundaryIndex& index, const PostoptConfig& cfg);

struct PostoptResult {
  SimplexMesh mesh;
  bool converged = false;
  int outer_iterations = 0;
  std::size_t poor_tets = 0;
  std::size_t unremovable_tets = 0;  // included in poor_tets
  std::size_t dropped_slivers = 0;   // over all iterations
};

/// Hybrid loop: mass-spring relaxation followed by poor-tet removal, until the
/// relaxation moves less than move_tol h_min and no poor tet remains. Stops
/// early, unconverged, once only unremovable tets are left and nothing moves.
PostoptResult hybrid_optimize(const SimplexMesh& mesh, const SizeField& field, const BoundaryIndex& index,
                              const PostoptConfig& cfg = {});

}  // namespace flowmesher

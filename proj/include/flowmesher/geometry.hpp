#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <span>

namespace flowmesher {

using Vec3 = Eigen::Vector3d;

enum class Dimension { Planar2D, Solid3D };

inline int dimension_rank(Dimension d) { return d == Dimension::Planar2D ? 2 : 3; }

/// Which feature of a segment or triangle a closest-point query landed on.
/// `index` is the local vertex (0..2) or local edge (0..2, edge i = (i, i+1)).
struct ClosestFeature {
  enum class Kind { Vertex, Edge, Face };
  Vec3 point;
  Kind kind;
  int index;
};

/// Closest point on segment [a, b]. Kind::Vertex with index 0/1 when the
/// clamp hits an endpoint, Kind::Edge otherwise.
ClosestFeature closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b);

/// Closest point on triangle (a, b, c), classified by Voronoi region.
ClosestFeature closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                         const Vec3& c);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Signed area in the xy-plane, positive for counterclockwise order.
double signed_area_xy(const Vec3& a, const Vec3& b, const Vec3& c);

/// Signed volume, positive when d lies on the side of (b - a) x (c - a).
double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Interior angles (radians) of a triangle at a, b, c.
std::array<double, 3> triangle_angles(const Vec3& a, const Vec3& b, const Vec3& c);

/// The six dihedral angles (radians) of a tetrahedron, ordered by the edge
/// they sit on: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
std::array<double, 6> dihedral_angles(const std::array<Vec3, 4>& t);

inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Closest points between two segments. Returns (point on first, point on second).
std::pair<Vec3, Vec3> closest_points_between_segments(const Vec3& p1, const Vec3& q1,
                                                      const Vec3& p2, const Vec3& q2);

/// Orthogonal projection of p onto the plane through `origin` with unit `normal`.
inline Vec3 project_onto_plane(const Vec3& p, const Vec3& origin, const Vec3& normal) {
  return p - (p - origin).dot(normal) * normal;
}

}  // namespace flowmesher

#pragma once

#include "flowmesher/geometry.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace flowmesher {

/// Reference to a boundary feature of a domain.
///
/// Planar domains: Vertex indexes `vertices`, Edge indexes `boundary_edges`.
/// Solid domains: additionally Face indexes `triangles`.
struct ElementRef {
  enum class Kind { Vertex, Edge, Face };
  Kind kind = Kind::Vertex;
  int index = -1;

  friend bool operator==(const ElementRef&, const ElementRef&) = default;
};

/// An extra boundary vertex inserted so particles near the boundary always
/// find a boundary vertex in their neighbour cells.
struct AugmentedVertex {
  Vec3 point;
  ElementRef owner;
  Vec3 normal;
};

/// Rigid map between the input frame and the simulation frame. For planar
/// domains the simulation frame puts the domain in z = 0; solid domains use
/// the identity.
struct PlaneFrame {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // input -> simulation
  Vec3 offset = Vec3::Zero();                              // applied after rotation

  Vec3 to_simulation(const Vec3& p) const { return rotation * p + offset; }
  Vec3 to_input(const Vec3& p) const { return rotation.transpose() * (p - offset); }
};

/// Watertight triangulated domain: a planar region (2D) or a closed surface (3D).
/// All geometry is stored in the simulation frame.
struct MeshDomain {
  Dimension dimension = Dimension::Planar2D;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  PlaneFrame frame;

  /// 2D: edges used by exactly one triangle, oriented so the domain is on
  /// the left. 3D: every surface edge, smaller index first.
  std::vector<std::array<int, 2>> boundary_edges;
  std::vector<Vec3> edge_normals;    // per boundary edge
  std::vector<Vec3> vertex_normals;  // per vertex (zero for interior vertices in 2D)
  std::vector<Vec3> face_normals;    // per triangle (3D only)

  std::vector<AugmentedVertex> augmented_vertices;

  std::vector<std::vector<int>> vertex_edges;   // boundary edges at each vertex
  std::vector<std::vector<int>> vertex_faces;   // triangles at each vertex (3D)
  std::vector<std::array<int, 2>> edge_faces;   // the two triangles at each edge (3D)
  std::vector<std::array<int, 3>> face_edges;   // edges of each triangle (3D)
  std::vector<char> on_boundary;                // per vertex

  double area = 0.0;             // A_2d
  double boundary_length = 0.0;  // L_2d
  double volume = 0.0;           // V_3d
  double surface_area = 0.0;     // A_3d

  bool is_planar() const { return dimension == Dimension::Planar2D; }

  /// Normal stored for a boundary feature.
  Vec3 normal_of(const ElementRef& e) const;

  /// Lower and upper corners of the vertex bounding box.
  std::pair<Vec3, Vec3> bounds() const;
};

struct ObjMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::string> warnings;
};

/// Parses the `v`/`f` subset of Wavefront OBJ. Face tokens may carry
/// `/vt/vn` suffixes; other record types are skipped with a warning.
ObjMesh parse_obj(std::istream& in);
ObjMesh read_obj(const std::filesystem::path& path);

/// Builds a validated domain: welds coincident vertices, classifies the
/// dimension, checks topology, normalizes orientation, computes measures
/// and normals. Does not augment the boundary.
MeshDomain make_domain(ObjMesh obj);

/// read_obj + make_domain.
MeshDomain load_obj(const std::filesystem::path& path);

/// Recomputes every boundary normal from the current vertices and faces.
void compute_normals(MeshDomain& domain);

/// Number of interior points inserted on a boundary segment of the given
/// length: ceil(length / (4 h) - 1), never negative.
int augmentation_count(double length, double h_min);

/// Inserts extra boundary vertices so consecutive boundary vertices are at
/// most 4 h_min apart (2D edges; 3D edges and triangle interiors).
void augment_boundary(MeshDomain& domain, double h_min);

}  // namespace flowmesher

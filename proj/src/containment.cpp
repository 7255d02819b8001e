#include "flowmesher/containment.hpp"

#include "flowmesher/error.hpp"

#include <algorithm>
#include <cmath>

namespace flowmesher {

BoundaryIndex::BoundaryIndex(const MeshDomain& domain, double h_min)
    : domain_(&domain), h_min_(h_min), grid_(2.0 * h_min, domain.dimension) {
  for (std::size_t v = 0; v < domain.vertices.size(); ++v) {
    if (!domain.on_boundary[v]) continue;
    points_.push_back(domain.vertices[v]);
    owners_.push_back({ElementRef::Kind::Vertex, static_cast<int>(v)});
  }
  for (const auto& a : domain.augmented_vertices) {
    points_.push_back(a.point);
    owners_.push_back(a.owner);
  }
  for (std::size_t i = 0; i < points_.size(); ++i) grid_.insert(static_cast<int>(i), points_[i]);
}

namespace {

using Kind = ElementRef::Kind;

// Boundary elements whose closest points are compared: edges in 2D, faces in 3D.
void collect_candidates(const MeshDomain& d, const ElementRef& owner, std::vector<int>& out) {
  if (d.is_planar()) {
    switch (owner.kind) {
      case Kind::Vertex:
        out.insert(out.end(), d.vertex_edges[owner.index].begin(), d.vertex_edges[owner.index].end());
        break;
      case Kind::Edge:
        out.push_back(owner.index);
        break;
      case Kind::Face:
        break;
    }
    return;
  }
  switch (owner.kind) {
    case Kind::Vertex:
      out.insert(out.end(), d.vertex_faces[owner.index].begin(), d.vertex_faces[owner.index].end());
      break;
    case Kind::Edge:
      out.push_back(d.edge_faces[owner.index][0]);
      out.push_back(d.edge_faces[owner.index][1]);
      break;
    case Kind::Face:
      out.push_back(owner.index);
      break;
  }
}

}  // namespace

Projection BoundaryIndex::closest_over(const Vec3& x, std::span<const int> vertex_ids) const {
  const MeshDomain& d = *domain_;
  std::vector<int> cand;
  for (int id : vertex_ids) collect_candidates(d, owners_[id], cand);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (int c : cand) {
    Projection p;
    if (d.is_planar()) {
      const auto& e = d.boundary_edges[c];
      const ClosestFeature f = closest_point_on_segment(x, d.vertices[e[0]], d.vertices[e[1]]);
      p.point = f.point;
      p.element = f.kind == ClosestFeature::Kind::Vertex ? ElementRef{Kind::Vertex, e[f.index]}
                                                         : ElementRef{Kind::Edge, c};
    } else {
      const auto& t = d.triangles[c];
      const ClosestFeature f =
          closest_point_on_triangle(x, d.vertices[t[0]], d.vertices[t[1]], d.vertices[t[2]]);
      p.point = f.point;
      switch (f.kind) {
        case ClosestFeature::Kind::Vertex:
          p.element = {Kind::Vertex, t[f.index]};
          break;
        case ClosestFeature::Kind::Edge:
          p.element = {Kind::Edge, d.face_edges[c][f.index]};
          break;
        case ClosestFeature::Kind::Face:
          p.element = {Kind::Face, c};
          break;
      }
    }
    p.distance = (x - p.point).norm();
    if (p.distance < best.distance) best = p;
  }
  if (!std::isfinite(best.distance)) throw SearchRadiusError("no boundary element near query point");
  best.normal = d.normal_of(best.element);
  return best;
}

std::optional<Projection> BoundaryIndex::try_project(const Vec3& x, int rings) const {
  thread_local std::vector<int> ids;
  grid_.neighbors(x, ids, rings);
  if (ids.empty()) return std::nullopt;
  return closest_over(x, ids);
}

Projection BoundaryIndex::project(const Vec3& x) const {
  auto p = try_project(x, kSearchRings);
  if (!p) {
    throw SearchRadiusError("no boundary vertex within the search block of a particle");
  }
  return *p;
}

Projection BoundaryIndex::locate(const Vec3& x) const {
  if (points_.empty()) throw SearchRadiusError("domain has no boundary vertices");
  // Grow shells of cells until they lie farther than the nearest vertex
  // found plus the largest gap between a boundary point and a vertex of
  // its element (at most 4 h_min after augmentation).
  const double cell = grid_.cell_size();
  const double margin = 4.0 * h_min_ + cell;
  std::vector<int> ids, shell;
  double nearest = std::numeric_limits<double>::infinity();
  for (int r = 0;; ++r) {
    grid_.ring(x, r, shell);
    for (int id : shell) nearest = std::min(nearest, (points_[id] - x).norm());
    ids.insert(ids.end(), shell.begin(), shell.end());
    if (std::isfinite(nearest) && (r - 1) * cell > nearest + margin) break;
    if (r > (1 << 20)) throw SearchRadiusError("boundary search diverged");
  }
  return closest_over(x, ids);
}

Side BoundaryIndex::classify(const Vec3& x, const Projection& proj) const {
  const MeshDomain& d = *domain_;
  const double tol = 1e-12 * h_min_;
  if (proj.distance <= tol) return Side::OnBoundary;

  // Near a planar vertex: vote over the incident edges and the vertex normal.
  if (d.is_planar()) {
    int vertex = -1;
    if (proj.element.kind == Kind::Vertex) {
      vertex = proj.element.index;
    } else {
      const auto& e = d.boundary_edges[proj.element.index];
      for (int v : e) {
        if ((proj.point - d.vertices[v]).norm() <= 1e-6 * h_min_) vertex = v;
      }
    }
    if (vertex >= 0) {
      const Vec3 rel = x - d.vertices[vertex];
      int votes = 0;
      auto vote = [&](const Vec3& n) {
        const double s = rel.dot(n);
        if (s > tol) ++votes;
        if (s < -tol) --votes;
      };
      for (int e : d.vertex_edges[vertex]) vote(d.edge_normals[e]);
      vote(d.vertex_normals[vertex]);
      if (votes > 0) return Side::Outside;
      if (votes < 0) return Side::Inside;
      return Side::OnBoundary;
    }
  }

  const double s = (x - proj.point).dot(proj.normal);
  if (s > tol) return Side::Outside;
  if (s < -tol) return Side::Inside;
  return Side::OnBoundary;
}

bool BoundaryIndex::enforce(Vec3& x, Vec3& v) const {
  auto p = try_project(x, kSearchRings);
  if (!p) return false;
  if (classify(x, *p) != Side::Outside) return false;
  x = p->point;
  v = reflect_velocity(v, p->normal);
  return true;
}

}  // namespace flowmesher

#pragma once

#include "flowmesher/domain.hpp"
#include "flowmesher/geometry.hpp"

#include <filesystem>
#include <random>
#include <sstream>
#include <string>

namespace testing {

using flowmesher::Vec3;

inline std::filesystem::path data_dir() { return FLOWMESHER_DATA_DIR; }

inline flowmesher::MeshDomain domain_from(const std::string& obj) {
  std::istringstream in(obj);
  return flowmesher::make_domain(flowmesher::parse_obj(in));
}

inline flowmesher::MeshDomain unit_square() {
  return domain_from("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 1 3 4\n");
}

inline flowmesher::MeshDomain rectangle(double w, double h) {
  std::ostringstream s;
  s << "v 0 0 0\nv " << w << " 0 0\nv " << w << ' ' << h << " 0\nv 0 " << h << " 0\nf 1 2 3\nf 1 3 4\n";
  return domain_from(s.str());
}

/// Axis-aligned box [0,a]x[0,b]x[0,c] with two triangles per side.
inline flowmesher::MeshDomain box(double a, double b, double c) {
  std::ostringstream s;
  for (int k = 0; k < 8; ++k) {
    s << "v " << ((k & 1) ? a : 0.0) << ' ' << ((k & 2) ? b : 0.0) << ' ' << ((k & 4) ? c : 0.0) << '\n';
  }
  // Outward-facing quads as vertex ids (1-based), split along the first diagonal.
  const int quads[6][4] = {{1, 3, 4, 2}, {5, 6, 8, 7}, {1, 2, 6, 5}, {3, 7, 8, 4}, {1, 5, 7, 3}, {2, 4, 8, 6}};
  for (const auto& q : quads) {
    s << "f " << q[0] << ' ' << q[1] << ' ' << q[2] << '\n';
    s << "f " << q[0] << ' ' << q[2] << ' ' << q[3] << '\n';
  }
  return domain_from(s.str());
}

inline flowmesher::MeshDomain lshape() { return flowmesher::load_obj(data_dir() / "lshape.obj"); }

/// Even-odd crossing test against the domain's boundary edges (xy-plane).
inline bool raycast_inside_2d(const flowmesher::MeshDomain& d, const Vec3& p) {
  bool inside = false;
  for (const auto& e : d.boundary_edges) {
    const Vec3& a = d.vertices[e[0]];
    const Vec3& b = d.vertices[e[1]];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

/// Parity of ray/triangle hits along a fixed skew direction.
inline bool raycast_inside_3d(const flowmesher::MeshDomain& d, const Vec3& p) {
  const Vec3 dir = Vec3(0.5773, 0.3127, 0.7541).normalized();
  int hits = 0;
  for (const auto& t : d.triangles) {
    const Vec3& a = d.vertices[t[0]];
    const Vec3 e1 = d.vertices[t[1]] - a;
    const Vec3 e2 = d.vertices[t[2]] - a;
    const Vec3 pv = dir.cross(e2);
    const double det = e1.dot(pv);
    if (std::abs(det) < 1e-14) continue;
    const Vec3 tv = p - a;
    const double u = tv.dot(pv) / det;
    if (u < 0.0 || u > 1.0) continue;
    const Vec3 qv = tv.cross(e1);
    const double v = dir.dot(qv) / det;
    if (v < 0.0 || u + v > 1.0) continue;
    if (e2.dot(qv) / det > 0.0) ++hits;
  }
  return hits % 2 == 1;
}

inline Vec3 random_in(std::mt19937_64& rng, const Vec3& lo, const Vec3& hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {lo.x() + u(rng) * (hi.x() - lo.x()), lo.y() + u(rng) * (hi.y() - lo.y()),
          lo.z() + u(rng) * (hi.z() - lo.z())};
}

}  // namespace testing

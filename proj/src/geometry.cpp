#include "flowmesher/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace flowmesher {

ClosestFeature closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return {a, ClosestFeature::Kind::Vertex, 0};
  const double t = (p - a).dot(ab) / len2;
  if (t <= 0.0) return {a, ClosestFeature::Kind::Vertex, 0};
  if (t >= 1.0) return {b, ClosestFeature::Kind::Vertex, 1};
  return {a + t * ab, ClosestFeature::Kind::Edge, 0};
}

// Voronoi-region walk (Ericson, Real-Time Collision Detection, 5.1.5).
ClosestFeature closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                         const Vec3& c) {
  using K = ClosestFeature::Kind;
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, K::Vertex, 0};

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, K::Vertex, 1};

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return {a + v * ab, K::Edge, 0};
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, K::Vertex, 2};

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return {a + w * ac, K::Edge, 2};
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {b + w * (c - b), K::Edge, 1};
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return {a + ab * v + ac * w, K::Face, 0};
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double signed_area_xy(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

std::array<double, 3> triangle_angles(const Vec3& a, const Vec3& b, const Vec3& c) {
  auto angle = [](const Vec3& u, const Vec3& v) {
    return std::atan2(u.cross(v).norm(), u.dot(v));
  };
  return {angle(b - a, c - a), angle(c - b, a - b), angle(a - c, b - c)};
}

std::array<double, 6> dihedral_angles(const std::array<Vec3, 4>& t) {
  std::array<double, 6> out{};
  for (std::size_t e = 0; e < kTetEdges.size(); ++e) {
    const int i = kTetEdges[e][0];
    const int j = kTetEdges[e][1];
    int k = -1;
    int l = -1;
    for (int m = 0; m < 4; ++m) {
      if (m == i || m == j) continue;
      (k < 0 ? k : l) = m;
    }
    const Vec3 axis = (t[j] - t[i]).normalized();
    Vec3 u = t[k] - t[i];
    Vec3 w = t[l] - t[i];
    u -= u.dot(axis) * axis;
    w -= w.dot(axis) * axis;
    out[e] = std::atan2(u.cross(w).norm(), u.dot(w));
  }
  return out;
}

std::pair<Vec3, Vec3> closest_points_between_segments(const Vec3& p1, const Vec3& q1,
                                                      const Vec3& p2, const Vec3& q2) {
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (a == 0.0 && e == 0.0) return {p1, p2};
  if (a == 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e == 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom != 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return {p1 + d1 * s, p2 + d2 * t};
}

}  // namespace flowmesher

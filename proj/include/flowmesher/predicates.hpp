#pragma once

#include "flowmesher/geometry.hpp"

namespace flowmesher::predicates {

// Sign-exact geometric predicates. Each is evaluated in extended precision
// first; when the result falls inside a forward error bound the determinant
// is recomputed in exact rational arithmetic. Return values are -1, 0, +1.

/// +1 when (a, b, c) is counterclockwise in the xy-plane.
int orient2d(const Vec3& a, const Vec3& b, const Vec3& c);

/// +1 when d lies on the side of (b - a) x (c - a), i.e. the tetrahedron
/// (a, b, c, d) has positive signed volume.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// +1 when d lies strictly inside the circumcircle of counterclockwise (a, b, c).
int incircle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// +1 when e lies strictly inside the circumsphere of positively oriented
/// (a, b, c, d).
int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e);

/// Number of times the exact fallback has been taken (process-wide, for tests).
long exact_fallback_count();

}  // namespace flowmesher::predicates

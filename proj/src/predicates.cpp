#include "flowmesher/predicates.hpp"

#include <atomic>
#include <cfloat>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace flowmesher::predicates {
namespace {

using Exact = boost::multiprecision::cpp_rational;
using Wide = long double;

std::atomic<long> g_exact_fallbacks{0};

// Generous forward-error coefficient for the extended-precision pass. The
// permanent bounds every rounding in the expression tree; anything closer to
// zero than this is decided exactly.
constexpr Wide kErrorCoefficient = 256.0L * LDBL_EPSILON;

template <class T>
struct P3 {
  T x, y, z;
};

template <class T>
P3<T> lift(const Vec3& v) {
  return {T(v.x()), T(v.y()), T(v.z())};
}

template <class T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

template <class T>
T orient2d_det(const P3<T>& a, const P3<T>& b, const P3<T>& c) {
  return (a.x - c.x) * (b.y - c.y) - (a.y - c.y) * (b.x - c.x);
}

template <class T>
T orient3d_det(const P3<T>& a, const P3<T>& b, const P3<T>& c, const P3<T>& d) {
  const T bx = b.x - a.x, by = b.y - a.y, bz = b.z - a.z;
  const T cx = c.x - a.x, cy = c.y - a.y, cz = c.z - a.z;
  const T dx = d.x - a.x, dy = d.y - a.y, dz = d.z - a.z;
  return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx);
}

template <class T>
T incircle_det(const P3<T>& a, const P3<T>& b, const P3<T>& c, const P3<T>& d) {
  const T adx = a.x - d.x, ady = a.y - d.y;
  const T bdx = b.x - d.x, bdy = b.y - d.y;
  const T cdx = c.x - d.x, cdy = c.y - d.y;
  const T alift = adx * adx + ady * ady;
  const T blift = bdx * bdx + bdy * bdy;
  const T clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
         clift * (adx * bdy - bdx * ady);
}

// Lifted 4x4 determinant with e as the reference point. Positive when e is
// inside the sphere of a tetrahedron with negative orient3d_det.
template <class T>
T insphere_det(const P3<T>& a, const P3<T>& b, const P3<T>& c, const P3<T>& d,
               const P3<T>& e) {
  const T aex = a.x - e.x, aey = a.y - e.y, aez = a.z - e.z;
  const T bex = b.x - e.x, bey = b.y - e.y, bez = b.z - e.z;
  const T cex = c.x - e.x, cey = c.y - e.y, cez = c.z - e.z;
  const T dex = d.x - e.x, dey = d.y - e.y, dez = d.z - e.z;

  const T ab = aex * bey - bex * aey;
  const T bc = bex * cey - cex * bey;
  const T cd = cex * dey - dex * cey;
  const T da = dex * aey - aex * dey;
  const T ac = aex * cey - cex * aey;
  const T bd = bex * dey - dex * bey;

  const T abc = aez * bc - bez * ac + cez * ab;
  const T bcd = bez * cd - cez * bd + dez * bc;
  const T cda = cez * da + dez * ac + aez * cd;
  const T dab = dez * ab + aez * bd + bez * da;

  const T alift = aex * aex + aey * aey + aez * aez;
  const T blift = bex * bex + bey * bey + bez * bez;
  const T clift = cex * cex + cey * cey + cez * cez;
  const T dlift = dex * dex + dey * dey + dez * dez;

  return (dlift * abc - clift * dab) + (blift * cda - alift * bcd);
}

// Permanents: the same expressions over absolute values.
Wide orient2d_perm(const P3<Wide>& a, const P3<Wide>& b, const P3<Wide>& c) {
  return std::fabs((a.x - c.x) * (b.y - c.y)) + std::fabs((a.y - c.y) * (b.x - c.x));
}

Wide orient3d_perm(const P3<Wide>& a, const P3<Wide>& b, const P3<Wide>& c,
                   const P3<Wide>& d) {
  const Wide bx = std::fabs(b.x - a.x), by = std::fabs(b.y - a.y), bz = std::fabs(b.z - a.z);
  const Wide cx = std::fabs(c.x - a.x), cy = std::fabs(c.y - a.y), cz = std::fabs(c.z - a.z);
  const Wide dx = std::fabs(d.x - a.x), dy = std::fabs(d.y - a.y), dz = std::fabs(d.z - a.z);
  return bx * (cy * dz + cz * dy) + by * (cx * dz + cz * dx) + bz * (cx * dy + cy * dx);
}

Wide incircle_perm(const P3<Wide>& a, const P3<Wide>& b, const P3<Wide>& c,
                   const P3<Wide>& d) {
  const Wide adx = std::fabs(a.x - d.x), ady = std::fabs(a.y - d.y);
  const Wide bdx = std::fabs(b.x - d.x), bdy = std::fabs(b.y - d.y);
  const Wide cdx = std::fabs(c.x - d.x), cdy = std::fabs(c.y - d.y);
  return (adx * adx + ady * ady) * (bdx * cdy + cdx * bdy) +
         (bdx * bdx + bdy * bdy) * (cdx * ady + adx * cdy) +
         (cdx * cdx + cdy * cdy) * (adx * bdy + bdx * ady);
}

Wide insphere_perm(const P3<Wide>& a, const P3<Wide>& b, const P3<Wide>& c,
                   const P3<Wide>& d, const P3<Wide>& e) {
  auto ab = [](Wide v) { return std::fabs(v); };
  const Wide aex = ab(a.x - e.x), aey = ab(a.y - e.y), aez = ab(a.z - e.z);
  const Wide bex = ab(b.x - e.x), bey = ab(b.y - e.y), bez = ab(b.z - e.z);
  const Wide cex = ab(c.x - e.x), cey = ab(c.y - e.y), cez = ab(c.z - e.z);
  const Wide dex = ab(d.x - e.x), dey = ab(d.y - e.y), dez = ab(d.z - e.z);

  const Wide pab = aex * bey + bex * aey;
  const Wide pbc = bex * cey + cex * bey;
  const Wide pcd = cex * dey + dex * cey;
  const Wide pda = dex * aey + aex * dey;
  const Wide pac = aex * cey + cex * aey;
  const Wide pbd = bex * dey + dex * bey;

  const Wide abc = aez * pbc + bez * pac + cez * pab;
  const Wide bcd = bez * pcd + cez * pbd + dez * pbc;
  const Wide cda = cez * pda + dez * pac + aez * pcd;
  const Wide dab = dez * pab + aez * pbd + bez * pda;

  const Wide alift = aex * aex + aey * aey + aez * aez;
  const Wide blift = bex * bex + bey * bey + bez * bez;
  const Wide clift = cex * cex + cey * cey + cez * cez;
  const Wide dlift = dex * dex + dey * dey + dez * dez;

  return dlift * abc + clift * dab + blift * cda + alift * bcd;
}

bool uncertain(Wide det, Wide perm) { return std::fabs(det) <= kErrorCoefficient * perm; }

}  // namespace

int orient2d(const Vec3& a, const Vec3& b, const Vec3& c) {
  const auto wa = lift<Wide>(a), wb = lift<Wide>(b), wc = lift<Wide>(c);
  const Wide det = orient2d_det(wa, wb, wc);
  if (!uncertain(det, orient2d_perm(wa, wb, wc))) return sign_of(det);
  g_exact_fallbacks.fetch_add(1, std::memory_order_relaxed);
  return sign_of(orient2d_det(lift<Exact>(a), lift<Exact>(b), lift<Exact>(c)));
}

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const auto wa = lift<Wide>(a), wb = lift<Wide>(b), wc = lift<Wide>(c), wd = lift<Wide>(d);
  const Wide det = orient3d_det(wa, wb, wc, wd);
  if (!uncertain(det, orient3d_perm(wa, wb, wc, wd))) return sign_of(det);
  g_exact_fallbacks.fetch_add(1, std::memory_order_relaxed);
  return sign_of(
      orient3d_det(lift<Exact>(a), lift<Exact>(b), lift<Exact>(c), lift<Exact>(d)));
}

int incircle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const auto wa = lift<Wide>(a), wb = lift<Wide>(b), wc = lift<Wide>(c), wd = lift<Wide>(d);
  const Wide det = incircle_det(wa, wb, wc, wd);
  if (!uncertain(det, incircle_perm(wa, wb, wc, wd))) return sign_of(det);
  g_exact_fallbacks.fetch_add(1, std::memory_order_relaxed);
  return sign_of(
      incircle_det(lift<Exact>(a), lift<Exact>(b), lift<Exact>(c), lift<Exact>(d)));
}

int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e) {
  const auto wa = lift<Wide>(a), wb = lift<Wide>(b), wc = lift<Wide>(c), wd = lift<Wide>(d),
             we = lift<Wide>(e);
  const Wide det = insphere_det(wa, wb, wc, wd, we);
  if (!uncertain(det, insphere_perm(wa, wb, wc, wd, we))) return -sign_of(det);
  g_exact_fallbacks.fetch_add(1, std::memory_order_relaxed);
  return -sign_of(insphere_det(lift<Exact>(a), lift<Exact>(b), lift<Exact>(c),
                               lift<Exact>(d), lift<Exact>(e)));
}

long exact_fallback_count() { return g_exact_fallbacks.load(std::memory_order_relaxed); }

}  // namespace flowmesher::predicates

#include "flowmesher/sizefield.hpp"

#include "flowmesher/delaunay.hpp"
#include "flowmesher/error.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace flowmesher {

double RadialLinear::operator()(const Vec3& x) const {
  const double rho = std::hypot(x.x() - center.x(), x.y() - center.y());
  if (rho < inner_radius) return (1.0 - falloff * rho / inner_radius) * r;
  return (1.0 - falloff) * r;
}

double DiscreteGrid::at(const Vec3& x) const {
  std::array<long long, 3> idx{};
  for (int k = 0; k < 3; ++k) {
    const long long i = static_cast<long long>(std::floor((x[k] - lower[k]) / cell));
    idx[k] = std::clamp<long long>(i, 0, dims[k] - 1);
  }
  return values[static_cast<std::size_t>((idx[2] * dims[1] + idx[1]) * dims[0] + idx[0])];
}

SizeField SizeField::uniform(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("target edge length must be positive");
  SizeField f;
  f.variant_ = h;
  f.h_min_ = f.h_max_ = h;
  return f;
}

SizeField SizeField::radial(const RadialLinear& law) {
  if (!(law.r > 0.0) || !(law.inner_radius > 0.0) || !(law.falloff >= 0.0) || !(law.falloff < 1.0)) {
    throw InputError("radial size law needs r > 0, inner_radius > 0 and 0 <= falloff < 1");
  }
  SizeField f;
  f.variant_ = law;
  f.h_min_ = (1.0 - law.falloff) * law.r;
  f.h_max_ = law.r;
  return f;
}

SizeField SizeField::discrete(DiscreteGrid grid) {
  if (grid.values.empty()) throw InputError("discrete size grid is empty");
  SizeField f;
  const auto [lo, hi] = std::minmax_element(grid.values.begin(), grid.values.end());
  f.h_min_ = *lo;
  f.h_max_ = *hi;
  for (const auto& a : grid.anchors) {
    f.h_min_ = std::min(f.h_min_, a.size);
    f.h_max_ = std::max(f.h_max_, a.size);
  }
  f.variant_ = std::move(grid);
  return f;
}

double SizeField::size_at(const Vec3& x) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return v;
        } else if constexpr (std::is_same_v<T, RadialLinear>) {
          return v(x);
        } else {
          return v.at(x);
        }
      },
      variant_);
}

namespace {

// Barycentric coordinates of p in a triangle (xy) or tetrahedron.
Eigen::Vector4d barycentric(const SimplexMesh& m, std::size_t e, const Vec3& p) {
  const auto el = m.element(e);
  Eigen::Vector4d w = Eigen::Vector4d::Zero();
  if (m.dimension == Dimension::Planar2D) {
    const Vec3& a = m.nodes[el[0]];
    const Vec3& b = m.nodes[el[1]];
    const Vec3& c = m.nodes[el[2]];
    const double den = signed_area_xy(a, b, c);
    w[0] = signed_area_xy(p, b, c) / den;
    w[1] = signed_area_xy(a, p, c) / den;
    w[2] = signed_area_xy(a, b, p) / den;
    w[3] = 0.0;
    return w;
  }
  const Vec3& a = m.nodes[el[0]];
  const Vec3& b = m.nodes[el[1]];
  const Vec3& c = m.nodes[el[2]];
  const Vec3& d = m.nodes[el[3]];
  const double den = signed_volume(a, b, c, d);
  w[0] = signed_volume(p, b, c, d) / den;
  w[1] = signed_volume(a, p, c, d) / den;
  w[2] = signed_volume(a, b, p, d) / den;
  w[3] = signed_volume(a, b, c, p) / den;
  return w;
}

}  // namespace

SizeField build_discrete(const MeshDomain& domain, std::span<const Anchor> anchors) {
  if (anchors.empty()) throw InputError("discrete size field needs at least one anchor");
  const bool planar = domain.is_planar();
  double h_min = std::numeric_limits<double>::infinity();
  double h_max = 0.0;
  for (const auto& a : anchors) {
    if (!(a.size > 0.0) || !std::isfinite(a.size)) {
      throw InputError(fmt::format("anchor size {} is not positive", a.size));
    }
    h_min = std::min(h_min, a.size);
    h_max = std::max(h_max, a.size);
  }

  auto [lo, hi] = domain.bounds();
  lo.array() -= h_max;
  hi.array() += h_max;
  if (planar) lo.z() = hi.z() = 0.0;

  // Merge exact duplicates; conflicting sizes are an input error.
  std::vector<Anchor> unique;
  for (Anchor a : anchors) {
    if (planar) a.point.z() = 0.0;
    for (int k = 0; k < 3; ++k) {
      if (a.point[k] < lo[k] || a.point[k] > hi[k]) {
        throw InputError(fmt::format("anchor ({}, {}, {}) lies outside the domain bounding box",
                                     a.point.x(), a.point.y(), a.point.z()));
      }
    }
    auto same = std::find_if(unique.begin(), unique.end(),
                             [&](const Anchor& u) { return u.point == a.point; });
    if (same == unique.end()) {
      unique.push_back(a);
    } else if (same->size != a.size) {
      throw InputError(fmt::format("anchor ({}, {}, {}) given twice with different sizes",
                                   a.point.x(), a.point.y(), a.point.z()));
    }
  }

  // Background mesh over box corners and anchors.
  std::vector<Vec3> pts;
  std::vector<double> sizes;
  const int ncorner = planar ? 4 : 8;
  for (int c = 0; c < ncorner; ++c) {
    pts.emplace_back((c & 1) ? hi.x() : lo.x(), (c & 2) ? hi.y() : lo.y(),
                     planar ? 0.0 : ((c & 4) ? hi.z() : lo.z()));
    sizes.push_back(h_min);
  }
  for (const auto& a : unique) {
    auto corner = std::find(pts.begin(), pts.begin() + ncorner, a.point);
    if (corner != pts.begin() + ncorner) {
      sizes[corner - pts.begin()] = a.size;
      continue;
    }
    pts.push_back(a.point);
    sizes.push_back(a.size);
  }
  const SimplexMesh bg = delaunay(pts, domain.dimension);

  DiscreteGrid grid;
  grid.lower = lo;
  grid.cell = h_min / 4.0;
  grid.anchors = unique;
  for (int k = 0; k < 3; ++k) {
    grid.dims[k] = (planar && k == 2) ? 1 : std::max<long long>(1, static_cast<long long>(std::ceil((hi[k] - lo[k]) / grid.cell)));
  }
  const std::size_t ncells = static_cast<std::size_t>(grid.dims[0] * grid.dims[1] * grid.dims[2]);
  if (ncells > 200'000'000ULL) throw InputError("discrete size grid would exceed 2e8 cells");
  grid.values.assign(ncells, h_min);

  // Per-simplex bounding boxes for the point location scan.
  const std::size_t ne = bg.num_elements();
  std::vector<std::pair<Vec3, Vec3>> boxes(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    Vec3 blo = bg.nodes[bg.element(e)[0]];
    Vec3 bhi = blo;
    for (int v : bg.element(e)) {
      blo = blo.cwiseMin(bg.nodes[v]);
      bhi = bhi.cwiseMax(bg.nodes[v]);
    }
    boxes[e] = {blo, bhi};
  }

  const double eps = 1e-12;
  std::size_t hint = 0;
  for (long long k = 0; k < grid.dims[2]; ++k) {
    for (long long j = 0; j < grid.dims[1]; ++j) {
      for (long long i = 0; i < grid.dims[0]; ++i) {
        Vec3 c = lo + grid.cell * Vec3(i + 0.5, j + 0.5, k + 0.5);
        if (planar) c.z() = 0.0;
        auto interpolate = [&](std::size_t e) {
          const Eigen::Vector4d w = barycentric(bg, e, c);
          double s = 0.0;
          const auto el = bg.element(e);
          for (std::size_t q = 0; q < el.size(); ++q) s += w[q] * sizes[el[q]];
          return s;
        };
        auto min_weight = [&](std::size_t e) {
          const Eigen::Vector4d w = barycentric(bg, e, c);
          return planar ? w.head<3>().minCoeff() : w.minCoeff();
        };
        double value = 0.0;
        bool found = false;
        if (ne > 0 && min_weight(hint) >= -eps) {
          value = interpolate(hint);
          found = true;
        }
        for (std::size_t e = 0; e < ne && !found; ++e) {
          const auto& [blo, bhi] = boxes[e];
          if ((c.array() < blo.array() - eps * grid.cell).any() ||
              (c.array() > bhi.array() + eps * grid.cell).any()) {
            continue;
          }
          if (min_weight(e) >= -eps) {
            value = interpolate(e);
            hint = e;
            found = true;
          }
        }
        if (!found) {
          ++grid.extrapolated_cells;
          double best = -std::numeric_limits<double>::infinity();
          for (std::size_t e = 0; e < ne; ++e) {
            const double w = min_weight(e);
            if (w > best) {
              best = w;
              value = interpolate(e);
            }
          }
        }
        grid.values[static_cast<std::size_t>((k * grid.dims[1] + j) * grid.dims[0] + i)] =
            std::clamp(value, h_min, h_max);
      }
    }
  }
  for (const auto& a : unique) {
    std::array<long long, 3> idx{};
    for (int k = 0; k < 3; ++k) {
      idx[k] = std::clamp<long long>(static_cast<long long>(std::floor((a.point[k] - lo[k]) / grid.cell)), 0,
                                     grid.dims[k] - 1);
    }
    grid.values[static_cast<std::size_t>((idx[2] * grid.dims[1] + idx[1]) * grid.dims[0] + idx[0])] = a.size;
  }
  return SizeField::discrete(std::move(grid));
}

}  // namespace flowmesher

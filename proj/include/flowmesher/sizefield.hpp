#pragma once

#include "flowmesher/domain.hpp"

#include <array>
#include <span>
#include <variant>
#include <vector>

namespace flowmesher {

struct Anchor {
  Vec3 point;
  double size = 0.0;
};

/// Piecewise linear radial law around the z axis through `center`:
/// h = (1 - falloff * rho / inner_radius) * r inside inner_radius,
/// (1 - falloff) * r outside.
struct RadialLinear {
  double r = 25.0;
  double inner_radius = 35.0;
  double falloff = 0.4;
  Vec3 center = Vec3::Zero();

  double operator()(const Vec3& x) const;
};

/// Target sizes sampled on a uniform lattice of cell edge h_min / 4.
struct DiscreteGrid {
  Vec3 lower = Vec3::Zero();
  double cell = 1.0;
  std::array<long long, 3> dims{1, 1, 1};
  std::vector<double> values;  // x fastest, then y, then z
  std::vector<Anchor> anchors;
  std::size_t extrapolated_cells = 0;  // cells whose centroid fell outside every background simplex

  double at(const Vec3& x) const;
};

class SizeField {
 public:
  static SizeField uniform(double h);
  static SizeField radial(const RadialLinear& law);
  static SizeField discrete(DiscreteGrid grid);

  double size_at(const Vec3& x) const;
  double pair_size(const Vec3& a, const Vec3& b) const { return 0.5 * (size_at(a) + size_at(b)); }

  double h_min() const { return h_min_; }
  double h_max() const { return h_max_; }
  bool is_uniform() const { return std::holds_alternative<double>(variant_); }
  const std::variant<double, RadialLinear, DiscreteGrid>& variant() const { return variant_; }

 private:
  std::variant<double, RadialLinear, DiscreteGrid> variant_;
  double h_min_ = 0.0;
  double h_max_ = 0.0;
};

/// Builds the discrete field over the domain's bounding box, expanded on
/// every side by the largest anchor size. Box corners are anchored at the
/// smallest anchor size; sizes are interpolated barycentrically at cell
/// centroids within a background Delaunay mesh of corners and anchors.
SizeField build_discrete(const MeshDomain& domain, std::span<const Anchor> anchors);

}  // namespace flowmesher

#include "flowmesher/triangulate.hpp"

#include "flowmesher/delaunay.hpp"
#include "flowmesher/error.hpp"
#include "flowmesher/postopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flowmesher {

std::vector<int> inside_elements(const SimplexMesh& mesh, const BoundaryIndex& index) {
  const int s = mesh.stride();
  const double h = index.h_min();
  const double flat = mesh.dimension == Dimension::Planar2D ? 1e-12 * h * h : 1e-12 * h * h * h;
  std::vector<int> keep;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto el = mesh.element(e);
    const double measure = s == 3 ? signed_area_xy(mesh.nodes[el[0]], mesh.nodes[el[1]], mesh.nodes[el[2]])
                                  : signed_volume(mesh.nodes[el[0]], mesh.nodes[el[1]], mesh.nodes[el[2]],
                                                  mesh.nodes[el[3]]);
    if (!(measure > flat)) continue;
    if (index.side_of(mesh.centroid(e)) == Side::Outside) continue;
    keep.push_back(static_cast<int>(e));
  }
  return keep;
}

SimplexMesh select_elements(const SimplexMesh& mesh, std::span<const int> keep, bool compact) {
  const int s = mesh.stride();
  SimplexMesh out;
  out.dimension = mesh.dimension;
  std::vector<int> remap(mesh.nodes.size(), compact ? -1 : 0);
  if (compact) {
    for (int e : keep) {
      for (int v : mesh.element(e)) remap[v] = 0;
    }
  }
  for (std::size_t v = 0; v < mesh.nodes.size(); ++v) {
    if (remap[v] < 0) continue;
    remap[v] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(mesh.nodes[v]);
    out.boundary.push_back(v < mesh.boundary.size() ? mesh.boundary[v] : 0);
    out.fixed.push_back(v < mesh.fixed.size() ? mesh.fixed[v] : 0);
  }
  out.connectivity.reserve(keep.size() * s);
  for (int e : keep) {
    for (int v : mesh.element(e)) out.connectivity.push_back(remap[v]);
  }
  out.rebuild_edges();
  return out;
}

SimplexMesh filter_to_domain(const SimplexMesh& mesh, const BoundaryIndex& index) {
  const std::vector<int> keep = inside_elements(mesh, index);
  if (keep.empty()) throw FilterError("no element of the triangulation lies inside the domain");
  return select_elements(mesh, keep, true);
}

SimplexMesh triangulate(std::span<const Vec3> points, const BoundaryIndex& index) {
  return filter_to_domain(delaunay(points, index.domain().dimension), index);
}

double edge_length_error(const SimplexMesh& mesh, const SizeField& field) {
  if (mesh.edges.empty()) throw InputError("edge length error of a mesh without edges");
  double sum = 0.0;
  for (const auto& [a, b] : mesh.edges) {
    const Vec3& pa = mesh.nodes[a];
    const Vec3& pb = mesh.nodes[b];
    const double h = field.pair_size(pa, pb);
    sum += ((pa - pb).norm() - h) / h;
  }
  return sum / static_cast<double>(mesh.edges.size());
}

double QualityReport::fraction_in(double lo, double hi) const {
  if (angles.empty()) return 0.0;
  const auto n = std::count_if(angles.begin(), angles.end(), [&](double a) { return a >= lo && a <= hi; });
  return static_cast<double>(n) / static_cast<double>(angles.size());
}

std::size_t QualityReport::count_below(double deg) const {
  return static_cast<std::size_t>(std::count_if(angles.begin(), angles.end(), [&](double a) { return a < deg; }));
}

std::size_t QualityReport::count_above(double deg) const {
  return static_cast<std::size_t>(std::count_if(angles.begin(), angles.end(), [&](double a) { return a > deg; }));
}

QualityReport quality_report(const SimplexMesh& mesh, const SizeField& field) {
  QualityReport r;
  r.dimension = mesh.dimension;
  r.nodes = mesh.nodes.size();
  r.elements = mesh.num_elements();
  r.edges = mesh.edges.size();
  r.e_avg = mesh.edges.empty() ? 0.0 : edge_length_error(mesh, field);
  constexpr double to_deg = 180.0 / std::numbers::pi;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto el = mesh.element(e);
    if (mesh.dimension == Dimension::Planar2D) {
      for (double a : triangle_angles(mesh.nodes[el[0]], mesh.nodes[el[1]], mesh.nodes[el[2]])) {
        r.angles.push_back(a * to_deg);
      }
    } else {
      const std::array<Vec3, 4> t{mesh.nodes[el[0]], mesh.nodes[el[1]], mesh.nodes[el[2]], mesh.nodes[el[3]]};
      for (double a : dihedral_angles(t)) r.angles.push_back(a * to_deg);
      r.min_quality = std::min(r.min_quality, tet_quality(t));
    }
  }
  for (double a : r.angles) {
    const int bin = std::clamp(static_cast<int>(std::floor(a / QualityReport::kBinWidth)), 0, QualityReport::kBins - 1);
    ++r.histogram[bin];
  }
  if (!r.angles.empty()) {
    const auto [lo, hi] = std::minmax_element(r.angles.begin(), r.angles.end());
    r.min_angle = *lo;
    r.max_angle = *hi;
  }
  return r;
}

}  // namespace flowmesher

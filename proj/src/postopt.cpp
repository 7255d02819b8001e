#include "flowmesher/postopt.hpp"

#include "flowmesher/delaunay.hpp"
#include "flowmesher/error.hpp"
#include "flowmesher/triangulate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace flowmesher {

double tet_quality(const std::array<Vec3, 4>& t) {
  const double v = std::abs(signed_volume(t[0], t[1], t[2], t[3]));
  if (v == 0.0) return 0.0;
  double lmax = 0.0;
  for (const auto& [i, j] : kTetEdges) lmax = std::max(lmax, (t[i] - t[j]).norm());
  const double s = triangle_area(t[1], t[2], t[3]) + triangle_area(t[0], t[2], t[3]) +
                   triangle_area(t[0], t[1], t[3]) + triangle_area(t[0], t[1], t[2]);
  return 6.0 * std::sqrt(6.0) * v / (lmax * s);
}

std::array<std::array<int, 2>, 2> largest_dihedral_edges(const std::array<Vec3, 4>& t) {
  const auto ang = dihedral_angles(t);
  // Opposite edge pairs in kTetEdges order: (01,23) (02,13) (03,12).
  constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 5}, {1, 4}, {2, 3}}};
  int best = 0;
  double best_sum = -1.0;
  for (int p = 0; p < 3; ++p) {
    const double sum = ang[pairs[p][0]] + ang[pairs[p][1]];
    if (sum > best_sum) {
      best_sum = sum;
      best = p;
    }
  }
  return {kTetEdges[pairs[best][0]], kTetEdges[pairs[best][1]]};
}

namespace {

bool is_free(const SimplexMesh& m, int v) {
  return !(v < static_cast<int>(m.boundary.size()) && m.boundary[v]) &&
         !(v < static_cast<int>(m.fixed.size()) && m.fixed[v]);
}

std::array<Vec3, 4> tet_points(const SimplexMesh& m, std::size_t e) {
  const auto el = m.element(e);
  return {m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]], m.nodes[el[3]]};
}

// Delaunay of the mesh nodes restricted to the domain, keeping every node.
SimplexMesh retriangulate(const SimplexMesh& mesh, const BoundaryIndex& index) {
  SimplexMesh d = delaunay(mesh.nodes, mesh.dimension);
  d.boundary = mesh.boundary;
  d.fixed = mesh.fixed;
  const std::vector<int> keep = inside_elements(d, index);
  if (keep.empty()) throw FilterError("post-optimization produced an empty mesh");
  return select_elements(d, keep, false);
}

double mean_displacement(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).norm();
  return s / static_cast<double>(a.size());
}

// Mean over the nodes selected by `mask`.
double mean_displacement(std::span<const Vec3> a, std::span<const Vec3> b, std::span<const char> mask) {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!mask[i]) continue;
    s += (a[i] - b[i]).norm();
    ++n;
  }
  return n == 0 ? 0.0 : s / static_cast<double>(n);
}

}  // namespace

std::vector<Vec3> spring_forces(const SimplexMesh& mesh, const SizeField& field, const PostoptConfig& cfg) {
  const auto& r = mesh.nodes;
  std::vector<Vec3> f(r.size(), Vec3::Zero());
  for (const auto& [i, j] : mesh.edges) {
    const Vec3 d = r[j] - r[i];
    const double l = d.norm();
    if (l == 0.0) continue;
    const Vec3 fij = cfg.k_s * (l - field.pair_size(r[i], r[j])) * (d / l);
    f[i] += fij;
    f[j] -= fij;
  }
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto t = tet_points(mesh, e);
    const double q = tet_quality(t);
    if (q < cfg.poor_q || q > cfg.mid_q) continue;
    const auto el = mesh.element(e);
    const auto [ac, bd] = largest_dihedral_edges(t);
    const int a = el[ac[0]], c = el[ac[1]], b = el[bd[0]], d = el[bd[1]];
    const double h_aim = std::sqrt(2.0 / 3.0) * (field.pair_size(r[a], r[b]) + field.pair_size(r[c], r[d]));
    const auto [p_ac, p_bd] = closest_points_between_segments(r[a], r[c], r[b], r[d]);
    const Vec3 sep = p_ac - p_bd;
    const double l_pq = sep.norm();
    for (int k = 0; k < 4; ++k) {
      const int v = el[k];
      if (!is_free(mesh, v)) continue;
      Vec3 fo = Vec3::Zero();
      if (l_pq > 0.0) {
        const bool on_ac = (v == a || v == c);
        const Vec3 away = (on_ac ? sep : Vec3(-sep)) / l_pq;
        fo += cfg.k_s * (h_aim - l_pq) * away;
      }
      for (int m = 0; m < 4; ++m) {
        if (m == k) continue;
        const Vec3 dj = r[el[m]] - r[v];
        const double l = dj.norm();
        if (l == 0.0) continue;
        fo += cfg.k_s * (l - field.pair_size(r[v], r[el[m]])) * (dj / l);
      }
      f[v] += fo;
    }
  }
  return f;
}

PhaseResult mass_spring_optimize(SimplexMesh& mesh, const SizeField& field, const PostoptConfig& cfg,
                                 const BoundaryIndex* index) {
  PhaseResult res;
  const double tol = cfg.move_tol * field.h_min();
  const std::size_t n = mesh.nodes.size();
  std::vector<Vec3> vel(n, Vec3::Zero());
  std::vector<char> free(n);
  for (std::size_t i = 0; i < n; ++i) free[i] = is_free(mesh, static_cast<int>(i));
  double dd = field.h_min();
  double t = 0.0;
  std::vector<Vec3> old;
  while (dd > tol && t <= cfg.t_total) {
    const std::vector<Vec3> f = spring_forces(mesh, field, cfg);
    old = mesh.nodes;
    for (std::size_t i = 0; i < n; ++i) {
      if (!free[i]) continue;
      const Vec3 acc = (f[i] - cfg.k_v * cfg.mass * vel[i] / cfg.dt) / cfg.mass;
      vel[i] += acc * cfg.dt;
      mesh.nodes[i] += vel[i] * cfg.dt;
      if (index) index->enforce(mesh.nodes[i], vel[i]);
    }
    dd = mean_displacement(mesh.nodes, old, free);
    t += cfg.dt;
    ++res.iterations;
  }
  res.mean_displacement = dd;
  res.converged = dd <= tol;
  return res;
}

static double shortest_edge(const std::array<Vec3, 4>& t) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m = std::min(m, (t[i] - t[j]).norm());
  return m;
}

ProjectionPass project_poor_tets(SimplexMesh& mesh, const PostoptConfig& cfg, double h_min) {
  ProjectionPass pass;
  auto& r = mesh.nodes;
  const std::vector<Vec3> before = r;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto t = tet_points(mesh, e);
    if (tet_quality(t) >= cfg.poor_q) continue;
    ++pass.poor;
    const auto el = mesh.element(e);
    std::vector<int> fr, fx;
    for (int v : el) (is_free(mesh, v) ? fr : fx).push_back(v);

    Vec3 origin, normal;
    switch (fr.size()) {
      case 0:
        pass.unremovable.push_back(static_cast<int>(e));
        continue;
      case 1:
        origin = r[fx[0]];
        normal = (r[fx[1]] - r[fx[0]]).cross(r[fx[2]] - r[fx[0]]);
        break;
      case 2: {
        const Vec3 mid = 0.5 * (r[fr[0]] + r[fr[1]]);
        origin = r[fx[0]];
        normal = (r[fx[1]] - r[fx[0]]).cross(mid - r[fx[0]]);
        break;
      }
      case 3: {
        // Longest free-free edge; the plane passes through the midpoints of the other two.
        std::array<std::array<int, 2>, 3> ed{{{fr[0], fr[1]}, {fr[1], fr[2]}, {fr[0], fr[2]}}};
        int longest = 0;
        for (int k = 1; k < 3; ++k) {
          if ((r[ed[k][0]] - r[ed[k][1]]).norm() > (r[ed[longest][0]] - r[ed[longest][1]]).norm()) longest = k;
        }
        std::array<Vec3, 2> mids;
        int m = 0;
        for (int k = 0; k < 3; ++k) {
          if (k != longest) mids[m++] = 0.5 * (r[ed[k][0]] + r[ed[k][1]]);
        }
        origin = r[fx[0]];
        normal = (mids[0] - origin).cross(mids[1] - origin);
        break;
      }
      default: {
        const auto [ac, bd] = largest_dihedral_edges(t);
        origin = 0.25 * (t[0] + t[1] + t[2] + t[3]);
        normal = (t[ac[1]] - t[ac[0]]).cross(t[bd[1]] - t[bd[0]]);
        break;
      }
    }
    const double len = normal.norm();
    if (!(len > 0.0) || !std::isfinite(len)) continue;
    normal /= len;
    std::array<Vec3, 4> moved = t;
    for (int k = 0; k < 4; ++k) {
      if (is_free(mesh, el[k])) moved[k] = project_onto_plane(t[k], origin, normal);
    }
    // A projection that folds two vertices onto each other leaves a pair the
    // springs can no longer separate; skip it and let the next pass retry.
    // The floor is absolute so repeated passes cannot creep below it.
    const double now = shortest_edge(t);
    const double floor = h_min > 0.0 ? std::min(now, cfg.collapse_guard * h_min) : cfg.collapse_guard * now;
    if (shortest_edge(moved) < floor) {
      ++pass.skipped;
      continue;
    }
    for (int k = 0; k < 4; ++k) r[el[k]] = moved[k];
  }
  pass.mean_displacement = mean_displacement(r, before);
  return pass;
}

RemovalResult remove_poor_tets(SimplexMesh& mesh, const BoundaryIndex& index, const PostoptConfig& cfg) {
  RemovalResult res;
  // Movements at round-off level count as none.
  const double still = 1e-12 * index.h_min();
  SimplexMesh current = retriangulate(mesh, index);
  for (int it = 0; it < cfg.max_removal; ++it) {
    ++res.iterations;
    const ProjectionPass pass = project_poor_tets(current, cfg, index.h_min());
    res.mean_displacement = pass.mean_displacement;
    if (pass.mean_displacement <= still) {
      res.converged = true;
      break;
    }
    Vec3 unused = Vec3::Zero();
    for (Vec3& p : current.nodes) index.enforce(p, unused);
    current = retriangulate(current, index);
  }

  // Census of the returned triangulation (projection on a scratch copy).
  SimplexMesh scratch = current;
  const ProjectionPass census = project_poor_tets(scratch, cfg, index.h_min());
  res.poor = census.poor;
  std::vector<char> drop(current.num_elements(), 0);
  for (int e : census.unremovable) {
    const auto t = tet_points(current, static_cast<std::size_t>(e));
    double l_max = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) l_max = std::max(l_max, (t[i] - t[j]).norm());
    const double regular = l_max * l_max * l_max / (6.0 * std::sqrt(2.0));
    if (std::abs(signed_volume(t[0], t[1], t[2], t[3])) <= cfg.sliver_volume * regular) {
      drop[static_cast<std::size_t>(e)] = 1;
      ++res.dropped;
      continue;
    }
    if (cfg.on_unremovable == PostoptConfig::Unremovable::Throw) {
      const auto el = current.element(static_cast<std::size_t>(e));
      throw UnremovableTetError(fmt::format("poor tetrahedron ({}, {}, {}, {}) has no free vertex", el[0] + 1,
                                            el[1] + 1, el[2] + 1, el[3] + 1));
    }
    ++res.unremovable;
  }
  if (res.dropped > 0) {
    std::vector<int> keep;
    for (std::size_t e = 0; e < current.num_elements(); ++e) {
      if (!drop[e]) keep.push_back(static_cast<int>(e));
    }
    current = select_elements(current, keep, false);
    res.poor -= res.dropped;
  }
  mesh = std::move(current);
  return res;
}

PostoptResult hybrid_optimize(const SimplexMesh& input, const SizeField& field, const BoundaryIndex& index,
                              const PostoptConfig& cfg) {
  PostoptResult out;
  const double tol = cfg.move_tol * field.h_min();
  SimplexMesh mesh = input;
  double dd = field.h_min();
  std::size_t n_poor = 1;
  int nt = 0;
  while ((dd > tol || n_poor != 0) && nt < cfg.max_outer) {
    const std::vector<Vec3> before = mesh.nodes;
    mesh = retriangulate(mesh, index);
    mass_spring_optimize(mesh, field, cfg, &index);
    const RemovalResult rem = remove_poor_tets(mesh, index, cfg);
    n_poor = rem.poor;
    out.unremovable_tets = rem.unremovable;
    out.dropped_slivers += rem.dropped;
    dd = mean_displacement(mesh.nodes, before);
    ++nt;
    if (n_poor != 0 && n_poor == rem.unremovable && dd <= tol) break;
  }
  out.outer_iterations = nt;
  out.poor_tets = n_poor;
  out.converged = dd <= tol && n_poor == 0;
  out.mesh = filter_to_domain(mesh, index);
  return out;
}

}  // namespace flowmesher

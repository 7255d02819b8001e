#include "flowmesher/delaunay.hpp"

#include "flowmesher/error.hpp"
#include "flowmesher/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>

namespace flowmesher {

Vec3 SimplexMesh::centroid(std::size_t e) const {
  Vec3 c = Vec3::Zero();
  for (int v : element(e)) c += nodes[v];
  return c / stride();
}

void SimplexMesh::sync_flags() {
  boundary.resize(nodes.size(), 0);
  fixed.resize(nodes.size(), 0);
}

void SimplexMesh::rebuild_edges() {
  edges.clear();
  const int s = stride();
  edges.reserve(num_elements() * (s == 3 ? 3 : 6));
  for (std::size_t e = 0; e < num_elements(); ++e) {
    auto el = element(e);
    for (int i = 0; i < s; ++i) {
      for (int j = i + 1; j < s; ++j) {
        edges.push_back({std::min(el[i], el[j]), std::max(el[i], el[j])});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

namespace {

std::uint64_t spread_bits2(std::uint64_t x) {
  x &= 0xffffffffULL;
  x = (x | (x << 16)) & 0x0000ffff0000ffffULL;
  x = (x | (x << 8)) & 0x00ff00ff00ff00ffULL;
  x = (x | (x << 4)) & 0x0f0f0f0f0f0f0f0fULL;
  x = (x | (x << 2)) & 0x3333333333333333ULL;
  x = (x | (x << 1)) & 0x5555555555555555ULL;
  return x;
}

std::uint64_t spread_bits3(std::uint64_t x) {
  x &= 0x1fffffULL;
  x = (x | (x << 32)) & 0x1f00000000ffffULL;
  x = (x | (x << 16)) & 0x1f0000ff0000ffULL;
  x = (x | (x << 8)) & 0x100f00f00f00f00fULL;
  x = (x | (x << 4)) & 0x10c30c30c30c30c3ULL;
  x = (x | (x << 2)) & 0x1249249249249249ULL;
  return x;
}

// Z-order insertion keeps the point-location walk short.
std::vector<int> spatial_order(std::span<const Vec3> pts, int dim) {
  Vec3 lo = pts[0];
  Vec3 hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
  const double scale = (dim == 2 ? 4294967295.0 : 2097151.0) / extent;
  std::vector<std::pair<std::uint64_t, int>> keyed(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 q = (pts[i] - lo) * scale;
    std::uint64_t code;
    if (dim == 2) {
      code = spread_bits2(static_cast<std::uint64_t>(q.x())) |
             (spread_bits2(static_cast<std::uint64_t>(q.y())) << 1);
    } else {
      code = spread_bits3(static_cast<std::uint64_t>(q.x())) |
             (spread_bits3(static_cast<std::uint64_t>(q.y())) << 1) |
             (spread_bits3(static_cast<std::uint64_t>(q.z())) << 2);
    }
    keyed[i] = {code, static_cast<int>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) order[i] = keyed[i].second;
  return order;
}

// Exact collinearity of three points in space: all coordinate projections
// are degenerate.
bool collinear(const Vec3& a, const Vec3& b, const Vec3& c) {
  auto yz = [](const Vec3& p) { return Vec3(p.y(), p.z(), 0.0); };
  auto zx = [](const Vec3& p) { return Vec3(p.z(), p.x(), 0.0); };
  return predicates::orient2d(a, b, c) == 0 && predicates::orient2d(yz(a), yz(b), yz(c)) == 0 &&
         predicates::orient2d(zx(a), zx(b), zx(c)) == 0;
}

// Bowyer-Watson with a symbolic vertex at infinity. Every hull facet carries
// a ghost cell joining it to that vertex, so the triangulation always covers
// the whole space and the convex hull comes out exactly.
template <int D>
class BowyerWatson {
 public:
  static constexpr int N = D + 1;
  using Verts = std::array<int, N>;

  struct Cell {
    Verts v;
    Verts nbr;
    bool alive;
  };

  explicit BowyerWatson(std::span<const Vec3> input)
      : n_input_(static_cast<int>(input.size())), inf_(n_input_) {
    pts_.assign(input.begin(), input.end());
  }

  void run() {
    const auto order = spatial_order({pts_.data(), static_cast<std::size_t>(n_input_)}, D);
    std::vector<int> seed = initial_simplex(order);
    if (seed.empty()) return;
    for (int p : order) {
      if (std::find(seed.begin(), seed.end(), p) == seed.end()) insert(p);
    }
  }

  std::vector<Verts> result() const {
    std::vector<Verts> out;
    for (const auto& c : cells_) {
      if (c.alive && !is_ghost(c)) out.push_back(c.v);
    }
    return out;
  }

 private:
  bool is_ghost(const Cell& c) const { return std::find(c.v.begin(), c.v.end(), inf_) != c.v.end(); }

  int orient(const Verts& v) const {
    if constexpr (D == 2) {
      return predicates::orient2d(pts_[v[0]], pts_[v[1]], pts_[v[2]]);
    } else {
      return predicates::orient3d(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[v[3]]);
    }
  }

  // p strictly inside the circumball of the finite facet f (p on its affine hull).
  bool in_facet_ball(const std::array<int, N - 1>& f, int p) const {
    if constexpr (D == 2) {
      const Vec3 &a = pts_[f[0]], &b = pts_[f[1]], &x = pts_[p];
      const int axis = a.x() != b.x() ? 0 : 1;
      const double lo = std::min(a[axis], b[axis]), hi = std::max(a[axis], b[axis]);
      return x[axis] > lo && x[axis] < hi;
    } else {
      // Any sphere through a, b, c cuts their plane in the circumcircle, so
      // lift a fourth point off the plane and use the exact insphere test.
      const Vec3 &a = pts_[f[0]], &b = pts_[f[1]], &c = pts_[f[2]];
      const Vec3 n = (b - a).cross(c - a);
      const Vec3 q = a + n.normalized() * std::max({(b - a).norm(), (c - a).norm(), 1.0});
      const int o = predicates::orient3d(a, b, c, q);
      if (o == 0) return false;
      return o * predicates::insphere(a, b, c, q, pts_[p]) > 0;
    }
  }

  // Conflict test. A ghost cell conflicts with points strictly beyond its
  // hull facet, or on the facet's plane inside its circumball.
  bool in_ball(const Cell& c, int p) const {
    for (int k = 0; k < N; ++k) {
      if (c.v[k] != inf_) continue;
      Verts v = c.v;
      v[k] = p;
      const int o = orient(v);
      if (o != 0) return o > 0;
      std::array<int, N - 1> f{};
      int m = 0;
      for (int j = 0; j < N; ++j) {
        if (j != k) f[m++] = c.v[j];
      }
      return in_facet_ball(f, p);
    }
    if constexpr (D == 2) {
      return predicates::incircle(pts_[c.v[0]], pts_[c.v[1]], pts_[c.v[2]], pts_[p]) > 0;
    } else {
      return predicates::insphere(pts_[c.v[0]], pts_[c.v[1]], pts_[c.v[2]], pts_[c.v[3]], pts_[p]) > 0;
    }
  }

  // First affinely independent D + 1 points in insertion order, meshed as one
  // cell plus its ghosts. Empty when the input is degenerate.
  std::vector<int> initial_simplex(const std::vector<int>& order) {
    std::vector<int> s{order[0]};
    for (int p : order) {
      const std::size_t k = s.size();
      if (static_cast<int>(k) == N) break;
      bool independent = false;
      if (k == 1) {
        independent = pts_[p] != pts_[s[0]];
      } else if (k == 2) {
        independent = D == 2 ? predicates::orient2d(pts_[s[0]], pts_[s[1]], pts_[p]) != 0
                             : !collinear(pts_[s[0]], pts_[s[1]], pts_[p]);
      } else {
        independent = predicates::orient3d(pts_[s[0]], pts_[s[1]], pts_[s[2]], pts_[p]) != 0;
      }
      if (independent) s.push_back(p);
    }
    if (static_cast<int>(s.size()) < N) return {};

    Verts v;
    std::copy(s.begin(), s.end(), v.begin());
    if (orient(v) < 0) std::swap(v[0], v[1]);
    std::vector<Verts> cells{v};
    for (int i = 0; i < N; ++i) {
      Verts g = v;
      g[i] = inf_;
      // Flip so that points beyond the facet read as positive.
      const int a = i == 0 ? 1 : 0, b = i <= 1 ? 2 : 1;
      std::swap(g[a], g[b]);
      cells.push_back(g);
    }
    std::map<std::vector<int>, std::pair<int, int>> facets;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const int id = alloc_cell();
      cells_[id] = {cells[c], {}, true};
      cells_[id].nbr.fill(-1);
      for (int j = 0; j < N; ++j) {
        std::vector<int> key;
        for (int k = 0; k < N; ++k) {
          if (k != j) key.push_back(cells[c][k]);
        }
        std::sort(key.begin(), key.end());
        auto [it, fresh] = facets.emplace(key, std::make_pair(id, j));
        if (!fresh) {
          cells_[id].nbr[j] = it->second.first;
          cells_[it->second.first].nbr[it->second.second] = id;
        }
      }
    }
    last_ = 0;
    return s;
  }

  int alloc_cell() {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      return id;
    }
    cells_.push_back({});
    mark_.push_back(0);
    return static_cast<int>(cells_.size()) - 1;
  }

  int scan_for_conflict(int p) const {
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      if (cells_[c].alive && in_ball(cells_[c], p)) return static_cast<int>(c);
    }
    return -1;
  }

  // Visibility walk toward the cell containing p. Falls back to a linear scan
  // for a conflicting cell if the walk leaves the triangulation or cycles.
  int locate(int p) {
    int c = last_;
    if (c < 0 || !cells_[c].alive) {
      c = 0;
      while (!cells_[c].alive) ++c;
    }
    const std::size_t limit = 4 * cells_.size() + 64;
    unsigned rot = 0;
    for (std::size_t step = 0; step < limit; ++step) {
      const Cell& cell = cells_[c];
      if (is_ghost(cell)) return c;  // p is beyond the hull here
      int next = -2;
      for (int k = 0; k < N; ++k) {
        const int i = static_cast<int>((k + rot) % N);
        Verts v = cell.v;
        v[i] = p;
        if (orient(v) < 0) {
          next = cell.nbr[i];
          break;
        }
      }
      if (next == -2) return c;
      if (next < 0) break;
      c = next;
      ++rot;
    }
    return scan_for_conflict(p);
  }

  void insert(int p) {
    int start = locate(p);
    if (start < 0) return;
    for (int v : cells_[start].v) {
      if (v != inf_ && pts_[v] == pts_[p]) return;  // exact duplicate
    }
    if (!in_ball(cells_[start], p)) {
      start = scan_for_conflict(p);
      if (start < 0) return;
    }

    // Grow the conflict region.
    std::vector<int> conflict{start};
    std::vector<int> touched{start};
    mark_[start] = 1;
    std::vector<std::pair<int, int>> horizon;  // (cell, facet)
    for (std::size_t k = 0; k < conflict.size(); ++k) {
      const int c = conflict[k];
      for (int i = 0; i < N; ++i) {
        const int n = cells_[c].nbr[i];
        if (n < 0) {
          horizon.emplace_back(c, i);
          continue;
        }
        if (mark_[n] == 0) {
          touched.push_back(n);
          if (in_ball(cells_[n], p)) {
            mark_[n] = 1;
            conflict.push_back(n);
          } else {
            mark_[n] = 2;
          }
        }
        if (mark_[n] == 2) horizon.emplace_back(c, i);
      }
    }

    // Star the horizon from p.
    std::unordered_map<std::uint64_t, std::pair<int, int>> open_facets;
    open_facets.reserve(horizon.size() * 2);
    std::vector<int> created;
    created.reserve(horizon.size());
    for (auto [c, i] : horizon) {
      const Verts v = cells_[c].v;
      const int outside = cells_[c].nbr[i];
      const int nc = alloc_cell();
      Cell& cell = cells_[nc];
      cell.v = v;
      cell.v[i] = p;
      cell.nbr.fill(-1);
      cell.nbr[i] = outside;
      cell.alive = true;
      mark_[nc] = 0;
      if (outside >= 0) {
        for (int j = 0; j < N; ++j) {
          if (cells_[outside].nbr[j] == c) cells_[outside].nbr[j] = nc;
        }
      }
      created.push_back(nc);
    }
    for (int nc : created) {
      for (int j = 0; j < N; ++j) {
        if (cells_[nc].v[j] == p) continue;
        // Facet opposite j contains p; key it by its other vertices.
        std::array<int, N - 2> others{};
        int m = 0;
        for (int k = 0; k < N; ++k) {
          if (k != j && cells_[nc].v[k] != p) others[m++] = cells_[nc].v[k];
        }
        std::uint64_t key;
        if constexpr (D == 2) {
          key = static_cast<std::uint64_t>(others[0]);
        } else {
          const auto lo = static_cast<std::uint64_t>(std::min(others[0], others[1]));
          const auto hi = static_cast<std::uint64_t>(std::max(others[0], others[1]));
          key = (lo << 32) | hi;
        }
        auto it = open_facets.find(key);
        if (it == open_facets.end()) {
          open_facets.emplace(key, std::make_pair(nc, j));
        } else {
          cells_[nc].nbr[j] = it->second.first;
          cells_[it->second.first].nbr[it->second.second] = nc;
          open_facets.erase(it);
        }
      }
    }

    for (int c : conflict) {
      cells_[c].alive = false;
      free_.push_back(c);
    }
    for (int c : touched) mark_[c] = 0;
    last_ = created.empty() ? last_ : created.front();
  }

  int n_input_;
  int inf_;
  std::vector<Vec3> pts_;
  std::vector<Cell> cells_;
  std::vector<std::uint8_t> mark_;
  std::vector<int> free_;
  int last_ = 0;
};

}  // namespace

SimplexMesh delaunay(std::span<const Vec3> points, Dimension dimension) {
  const int dim = dimension_rank(dimension);
  if (static_cast<int>(points.size()) < dim + 1) {
    throw DegenerateInputError("delaunay: need at least " + std::to_string(dim + 1) +
                               " points, got " + std::to_string(points.size()));
  }
  SimplexMesh mesh;
  mesh.dimension = dimension;
  mesh.nodes.assign(points.begin(), points.end());
  mesh.sync_flags();

  if (dim == 2) {
    std::vector<Vec3> flat(points.begin(), points.end());
    for (auto& p : flat) p.z() = 0.0;
    BowyerWatson<2> bw(flat);
    bw.run();
    for (const auto& t : bw.result()) mesh.connectivity.insert(mesh.connectivity.end(), t.begin(), t.end());
  } else {
    BowyerWatson<3> bw(points);
    bw.run();
    for (const auto& t : bw.result()) mesh.connectivity.insert(mesh.connectivity.end(), t.begin(), t.end());
  }
  if (mesh.connectivity.empty()) {
    throw DegenerateInputError(dim == 2 ? "delaunay: all points are collinear"
                                        : "delaunay: all points are coplanar");
  }
  mesh.rebuild_edges();
  return mesh;
}

}  // namespace flowmesher

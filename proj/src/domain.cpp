#include "flowmesher/domain.hpp"

#include "flowmesher/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace flowmesher {

Vec3 MeshDomain::normal_of(const ElementRef& e) const {
  switch (e.kind) {
    case ElementRef::Kind::Vertex:
      return vertex_normals[e.index];
    case ElementRef::Kind::Edge:
      return edge_normals[e.index];
    case ElementRef::Kind::Face:
      return face_normals[e.index];
  }
  return Vec3::Zero();
}

std::pair<Vec3, Vec3> MeshDomain::bounds() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// OBJ parsing

namespace {

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end != begin && *end == '\0';
}

bool parse_index(const std::string& tok, long nverts, int& out) {
  const std::string head = tok.substr(0, tok.find('/'));
  if (head.empty()) return false;
  const char* begin = head.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || v == 0) return false;
  const long idx = v > 0 ? v - 1 : nverts + v;
  if (idx < 0) return false;
  out = static_cast<int>(idx);
  return true;
}

}  // namespace

ObjMesh parse_obj(std::istream& in) {
  ObjMesh obj;
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> ignored;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);

    if (tag == "v") {
      if (tokens.size() < 3 || tokens.size() > 4) {
        throw ParseError("vertex record needs 3 coordinates", line_no);
      }
      Vec3 p;
      for (int k = 0; k < 3; ++k) {
        if (!parse_double(tokens[k], p[k])) {
          throw ParseError("bad vertex coordinate '" + tokens[k] + "'", line_no);
        }
      }
      obj.vertices.push_back(p);
    } else if (tag == "f") {
      if (tokens.size() != 3) {
        throw UnsupportedFaceError(
            fmt::format("line {}: face with {} vertices; only triangles are supported",
                        line_no, tokens.size()));
      }
      std::array<int, 3> tri{};
      for (int k = 0; k < 3; ++k) {
        if (!parse_index(tokens[k], static_cast<long>(obj.vertices.size()), tri[k])) {
          throw ParseError("bad face index '" + tokens[k] + "'", line_no);
        }
      }
      obj.triangles.push_back(tri);
    } else {
      ++ignored[tag];
    }
  }
  for (const auto& [tag, count] : ignored) {
    obj.warnings.push_back(fmt::format("ignored {} '{}' record(s)", count, tag));
  }
  for (const auto& t : obj.triangles) {
    for (int v : t) {
      if (v >= static_cast<int>(obj.vertices.size())) {
        throw ParseError(fmt::format("face references vertex {} of {}", v + 1,
                                     obj.vertices.size()),
                         line_no);
      }
    }
  }
  return obj;
}

ObjMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_obj(in);
}

// ---------------------------------------------------------------------------
// Domain construction

namespace {

struct CellKey {
  long long x, y, z;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
    h ^= static_cast<std::size_t>(k.y) * 19349663u;
    h ^= static_cast<std::size_t>(k.z) * 83492791u;
    return h;
  }
};

// Merges vertices closer than `tol`; the first occurrence keeps its coordinates.
void weld(ObjMesh& obj, double tol) {
  if (tol <= 0.0 || obj.vertices.empty()) return;
  std::unordered_map<CellKey, std::vector<int>, CellKeyHash> cells;
  std::vector<int> remap(obj.vertices.size());
  std::vector<Vec3> kept;
  for (std::size_t i = 0; i < obj.vertices.size(); ++i) {
    const Vec3& p = obj.vertices[i];
    const CellKey key{static_cast<long long>(std::floor(p.x() / tol)),
                      static_cast<long long>(std::floor(p.y() / tol)),
                      static_cast<long long>(std::floor(p.z() / tol))};
    int found = -1;
    for (long long dx = -1; dx <= 1 && found < 0; ++dx) {
      for (long long dy = -1; dy <= 1 && found < 0; ++dy) {
        for (long long dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = cells.find({key.x + dx, key.y + dy, key.z + dz});
          if (it == cells.end()) continue;
          for (int k : it->second) {
            if ((kept[k] - p).norm() <= tol) {
              found = k;
              break;
            }
          }
        }
      }
    }
    if (found < 0) {
      found = static_cast<int>(kept.size());
      kept.push_back(p);
      cells[key].push_back(found);
    }
    remap[i] = found;
  }
  if (kept.size() == obj.vertices.size()) return;
  obj.vertices = std::move(kept);
  std::vector<std::array<int, 3>> tris;
  for (auto t : obj.triangles) {
    for (int& v : t) v = remap[v];
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      obj.warnings.push_back("dropped a triangle that collapsed during vertex welding");
      continue;
    }
    tris.push_back(t);
  }
  obj.triangles = std::move(tris);
}

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

void build_planar(MeshDomain& d) {
  for (auto& t : d.triangles) {
    if (signed_area_xy(d.vertices[t[0]], d.vertices[t[1]], d.vertices[t[2]]) < 0.0) {
      std::swap(t[1], t[2]);
    }
  }
  // Directed half-edges; an undirected edge used once is boundary.
  std::unordered_map<std::uint64_t, std::vector<std::array<int, 2>>> uses;
  for (const auto& t : d.triangles) {
    for (int k = 0; k < 3; ++k) uses[edge_key(t[k], t[(k + 1) % 3])].push_back({t[k], t[(k + 1) % 3]});
  }
  std::vector<std::array<int, 2>> bad;
  for (const auto& [key, list] : uses) {
    if (list.size() == 1) d.boundary_edges.push_back(list[0]);
    if (list.size() > 2) bad.push_back(list[0]);
  }
  if (!bad.empty()) {
    std::string msg = "planar domain has non-manifold edges:";
    for (const auto& e : bad) msg += fmt::format(" ({},{})", e[0] + 1, e[1] + 1);
    throw TopologyError(msg);
  }
  std::sort(d.boundary_edges.begin(), d.boundary_edges.end());

  d.area = 0.0;
  for (const auto& t : d.triangles) {
    d.area += signed_area_xy(d.vertices[t[0]], d.vertices[t[1]], d.vertices[t[2]]);
  }
  d.boundary_length = 0.0;
  d.vertex_edges.assign(d.vertices.size(), {});
  d.on_boundary.assign(d.vertices.size(), 0);
  for (std::size_t e = 0; e < d.boundary_edges.size(); ++e) {
    const auto [a, b] = d.boundary_edges[e];
    d.boundary_length += (d.vertices[b] - d.vertices[a]).norm();
    d.vertex_edges[a].push_back(static_cast<int>(e));
    d.vertex_edges[b].push_back(static_cast<int>(e));
    d.on_boundary[a] = d.on_boundary[b] = 1;
  }
  if (!(d.area > 0.0) || !(d.boundary_length > 0.0)) {
    throw TopologyError("planar domain has no area");
  }
}

void build_solid(MeshDomain& d) {
  const std::size_t nt = d.triangles.size();
  std::unordered_map<std::uint64_t, std::vector<int>> edge_tris;
  for (std::size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      edge_tris[edge_key(d.triangles[t][k], d.triangles[t][(k + 1) % 3])].push_back(
          static_cast<int>(t));
    }
  }
  std::vector<std::uint64_t> bad;
  for (const auto& [key, tris] : edge_tris) {
    if (tris.size() != 2) bad.push_back(key);
  }
  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    std::string msg = fmt::format("surface is not watertight; {} edge(s) not shared by exactly two triangles:", bad.size());
    for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 20); ++i) {
      msg += fmt::format(" ({},{})", (bad[i] >> 32) + 1, (bad[i] & 0xffffffffULL) + 1);
    }
    throw TopologyError(msg);
  }

  // Propagate a consistent winding across each connected component.
  auto has_directed = [&](int t, int a, int b) {
    const auto& tri = d.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] == a && tri[(k + 1) % 3] == b) return true;
    }
    return false;
  };
  std::vector<char> seen(nt, 0);
  for (std::size_t seed = 0; seed < nt; ++seed) {
    if (seen[seed]) continue;
    seen[seed] = 1;
    std::vector<int> queue{static_cast<int>(seed)};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int t = queue[q];
      for (int k = 0; k < 3; ++k) {
        const int a = d.triangles[t][k];
        const int b = d.triangles[t][(k + 1) % 3];
        for (int u : edge_tris[edge_key(a, b)]) {
          if (u == t) continue;
          if (seen[u]) {
            if (has_directed(u, a, b)) {
              throw TopologyError("surface is not orientable");
            }
            continue;
          }
          if (has_directed(u, a, b)) std::swap(d.triangles[u][1], d.triangles[u][2]);
          seen[u] = 1;
          queue.push_back(u);
        }
      }
    }
  }

  double vol = 0.0;
  for (const auto& t : d.triangles) {
    vol += d.vertices[t[0]].dot(d.vertices[t[1]].cross(d.vertices[t[2]])) / 6.0;
  }
  if (vol < 0.0) {
    for (auto& t : d.triangles) std::swap(t[1], t[2]);
    vol = -vol;
  }
  d.volume = vol;
  d.surface_area = 0.0;
  for (const auto& t : d.triangles) {
    d.surface_area += triangle_area(d.vertices[t[0]], d.vertices[t[1]], d.vertices[t[2]]);
  }
  if (!(d.volume > 0.0) || !(d.surface_area > 0.0)) {
    throw TopologyError("solid domain encloses no volume");
  }

  // Edge and adjacency tables.
  std::vector<std::uint64_t> keys;
  keys.reserve(edge_tris.size());
  for (const auto& [key, tris] : edge_tris) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  std::unordered_map<std::uint64_t, int> edge_id;
  d.boundary_edges.clear();
  d.edge_faces.clear();
  for (auto key : keys) {
    edge_id[key] = static_cast<int>(d.boundary_edges.size());
    d.boundary_edges.push_back({static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffULL)});
    const auto& tris = edge_tris[key];
    d.edge_faces.push_back({tris[0], tris[1]});
  }
  d.face_edges.assign(nt, {});
  d.vertex_faces.assign(d.vertices.size(), {});
  d.vertex_edges.assign(d.vertices.size(), {});
  d.on_boundary.assign(d.vertices.size(), 0);
  for (std::size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const int a = d.triangles[t][k];
      const int b = d.triangles[t][(k + 1) % 3];
      d.face_edges[t][k] = edge_id[edge_key(a, b)];
      d.vertex_faces[a].push_back(static_cast<int>(t));
      d.on_boundary[a] = 1;
    }
  }
  for (std::size_t e = 0; e < d.boundary_edges.size(); ++e) {
    d.vertex_edges[d.boundary_edges[e][0]].push_back(static_cast<int>(e));
    d.vertex_edges[d.boundary_edges[e][1]].push_back(static_cast<int>(e));
  }
}

}  // namespace

MeshDomain make_domain(ObjMesh obj) {
  if (obj.vertices.empty() || obj.triangles.empty()) {
    throw TopologyError("domain has no triangles");
  }
  Vec3 lo = obj.vertices[0];
  Vec3 hi = obj.vertices[0];
  for (const auto& v : obj.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double diag = (hi - lo).norm();
  const double tol = 1e-9 * diag;
  weld(obj, tol);
  if (obj.triangles.empty()) throw TopologyError("domain has no triangles after welding");

  MeshDomain d;
  d.vertices = std::move(obj.vertices);
  d.triangles = std::move(obj.triangles);

  // Plane through the vertex set, using the largest triangle's normal.
  Vec3 best = Vec3::Zero();
  for (const auto& t : d.triangles) {
    const Vec3 n = (d.vertices[t[1]] - d.vertices[t[0]]).cross(d.vertices[t[2]] - d.vertices[t[0]]);
    if (n.squaredNorm() > best.squaredNorm()) best = n;
  }
  if (best.squaredNorm() == 0.0) throw TopologyError("all domain triangles are degenerate");
  const Vec3 normal = best.normalized();
  const Vec3 origin = d.vertices[d.triangles[0][0]];
  bool planar = true;
  for (const auto& v : d.vertices) {
    if (std::abs((v - origin).dot(normal)) > tol) {
      planar = false;
      break;
    }
  }

  if (planar) {
    d.dimension = Dimension::Planar2D;
    PlaneFrame frame;
    if (std::abs(std::abs(normal.z()) - 1.0) <= 1e-12) {
      frame.offset = Vec3(0.0, 0.0, -origin.z());
    } else {
      Vec3 e1 = normal.unitOrthogonal();
      Vec3 e2 = normal.cross(e1);
      frame.rotation.row(0) = e1.transpose();
      frame.rotation.row(1) = e2.transpose();
      frame.rotation.row(2) = normal.transpose();
      frame.offset = -frame.rotation * origin;
    }
    for (auto& v : d.vertices) {
      v = frame.to_simulation(v);
      v.z() = 0.0;
    }
    d.frame = frame;
    build_planar(d);
  } else {
    d.dimension = Dimension::Solid3D;
    build_solid(d);
  }
  compute_normals(d);
  return d;
}

MeshDomain load_obj(const std::filesystem::path& path) { return make_domain(read_obj(path)); }

void compute_normals(MeshDomain& d) {
  const std::size_t nv = d.vertices.size();
  d.vertex_normals.assign(nv, Vec3::Zero());
  d.edge_normals.assign(d.boundary_edges.size(), Vec3::Zero());

  if (d.is_planar()) {
    d.face_normals.clear();
    for (std::size_t e = 0; e < d.boundary_edges.size(); ++e) {
      const auto [a, b] = d.boundary_edges[e];
      const Vec3 t = d.vertices[b] - d.vertices[a];
      const Vec3 n(t.y(), -t.x(), 0.0);
      if (n.norm() == 0.0) throw DegenerateNormalError(fmt::format("boundary edge {} has zero length", e));
      d.edge_normals[e] = n.normalized();
      d.vertex_normals[a] += d.edge_normals[e];
      d.vertex_normals[b] += d.edge_normals[e];
    }
    for (std::size_t v = 0; v < nv; ++v) {
      if (!d.on_boundary[v]) continue;
      const double len = d.vertex_normals[v].norm();
      if (len <= 1e-12) {
        throw DegenerateNormalError(fmt::format("boundary vertex {} folds back on itself", v + 1));
      }
      d.vertex_normals[v] /= len;
    }
    return;
  }

  d.face_normals.assign(d.triangles.size(), Vec3::Zero());
  for (std::size_t t = 0; t < d.triangles.size(); ++t) {
    const auto& tri = d.triangles[t];
    const Vec3 n = (d.vertices[tri[1]] - d.vertices[tri[0]]).cross(d.vertices[tri[2]] - d.vertices[tri[0]]);
    if (n.norm() == 0.0) throw DegenerateNormalError(fmt::format("triangle {} is degenerate", t + 1));
    d.face_normals[t] = n.normalized();
    // Angle-weighted contribution to each corner.
    const auto angles = triangle_angles(d.vertices[tri[0]], d.vertices[tri[1]], d.vertices[tri[2]]);
    for (int k = 0; k < 3; ++k) d.vertex_normals[tri[k]] += angles[k] * d.face_normals[t];
  }
  for (std::size_t e = 0; e < d.boundary_edges.size(); ++e) {
    const Vec3 s = d.face_normals[d.edge_faces[e][0]] + d.face_normals[d.edge_faces[e][1]];
    const double len = s.norm();
    if (len <= 1e-12) {
      throw DegenerateNormalError(fmt::format("edge ({},{}) folds back on itself",
                                              d.boundary_edges[e][0] + 1, d.boundary_edges[e][1] + 1));
    }
    d.edge_normals[e] = s / len;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (!d.on_boundary[v]) continue;
    const double len = d.vertex_normals[v].norm();
    if (len <= 1e-12) throw DegenerateNormalError(fmt::format("vertex {} has no defined normal", v + 1));
    d.vertex_normals[v] /= len;
  }
}

// ---------------------------------------------------------------------------
// Boundary augmentation

int augmentation_count(double length, double h_min) {
  const double n = std::ceil(length / (4.0 * h_min) - 1.0);
  return n > 0.0 ? static_cast<int>(n) : 0;
}

namespace {

std::vector<Vec3> subdivide(const Vec3& a, const Vec3& b, int n) {
  std::vector<Vec3> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.push_back(a + (b - a) * (static_cast<double>(i) / (n + 1)));
  return out;
}

// Barycentric coordinates of p with respect to (a, b, c), p assumed in-plane.
Eigen::Vector3d barycentric(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 v0 = b - a, v1 = c - a, v2 = p - a;
  const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
  const double d20 = v2.dot(v0), d21 = v2.dot(v1);
  const double den = d00 * d11 - d01 * d01;
  const double v = (d11 * d20 - d01 * d21) / den;
  const double w = (d00 * d21 - d01 * d20) / den;
  return {1.0 - v - w, v, w};
}

}  // namespace

void augment_boundary(MeshDomain& d, double h_min) {
  if (!(h_min > 0.0)) throw InputError("augment_boundary: h_min must be positive");
  d.augmented_vertices.clear();
  const double dup_tol = 1e-9 * h_min;

  // Points already placed on each edge (for de-duplication across triangles).
  std::vector<std::vector<Vec3>> on_edge(d.boundary_edges.size());
  for (std::size_t e = 0; e < d.boundary_edges.size(); ++e) {
    const Vec3& a = d.vertices[d.boundary_edges[e][0]];
    const Vec3& b = d.vertices[d.boundary_edges[e][1]];
    for (const Vec3& p : subdivide(a, b, augmentation_count((b - a).norm(), h_min))) {
      d.augmented_vertices.push_back({p, {ElementRef::Kind::Edge, static_cast<int>(e)}, d.edge_normals[e]});
      on_edge[e].push_back(p);
    }
  }
  if (d.is_planar()) return;

  auto add_on_edge = [&](int e, const Vec3& p) {
    const Vec3& a = d.vertices[d.boundary_edges[e][0]];
    const Vec3& b = d.vertices[d.boundary_edges[e][1]];
    if ((p - a).norm() <= dup_tol || (p - b).norm() <= dup_tol) return;
    for (const Vec3& q : on_edge[e]) {
      if ((p - q).norm() <= dup_tol) return;
    }
    on_edge[e].push_back(p);
    d.augmented_vertices.push_back({p, {ElementRef::Kind::Edge, e}, d.edge_normals[e]});
  };

  for (std::size_t t = 0; t < d.triangles.size(); ++t) {
    const auto& tri = d.triangles[t];
    // Local labelling: E_ab longest, E_bc shortest (ties by local index).
    std::array<double, 3> len{};
    for (int k = 0; k < 3; ++k) len[k] = (d.vertices[tri[(k + 1) % 3]] - d.vertices[tri[k]]).norm();
    int longest = 0;
    for (int k = 1; k < 3; ++k) if (len[k] > len[longest]) longest = k;
    int shortest = (longest + 1) % 3;
    for (int k = 0; k < 3; ++k) if (k != longest && len[k] < len[shortest]) shortest = k;
    // Edge k runs from local vertex k to k+1. The longest and shortest edges
    // share exactly one vertex, which becomes b.
    const int s0 = shortest, s1 = (shortest + 1) % 3;
    const int l0 = longest, l1 = (longest + 1) % 3;
    const int ib = (s0 == l0 || s0 == l1) ? s0 : s1;
    const int ia = (l0 == ib) ? l1 : l0;
    const int ic = (s0 == ib) ? s1 : s0;
    const Vec3& a = d.vertices[tri[ia]];
    const Vec3& b = d.vertices[tri[ib]];
    const Vec3& c = d.vertices[tri[ic]];

    const int n_ab = augmentation_count((a - b).norm(), h_min);
    const int n_bc = augmentation_count((c - b).norm(), h_min);
    if (n_bc == 0) continue;

    // Edge c-a in the global table.
    int edge_ca = -1;
    for (int k = 0; k < 3; ++k) {
      const auto& ge = d.boundary_edges[d.face_edges[t][k]];
      if ((ge[0] == tri[ia] && ge[1] == tri[ic]) || (ge[0] == tri[ic] && ge[1] == tri[ia])) {
        edge_ca = d.face_edges[t][k];
      }
    }

    const double inside_tol = 1e-9;
    for (int i = 1; i <= n_bc; ++i) {
      const Vec3 row = b + (c - b) * (static_cast<double>(i) / (n_bc + 1));
      for (int j = 1; j <= n_ab + 1; ++j) {
        const Vec3 p = row + (a - b) * (static_cast<double>(j) / (n_ab + 1));
        const Eigen::Vector3d bc = barycentric(p, a, b, c);
        if (bc.minCoeff() > inside_tol) {
          d.augmented_vertices.push_back({p, {ElementRef::Kind::Face, static_cast<int>(t)}, d.face_normals[t]});
        }
      }
      add_on_edge(edge_ca, c + (a - c) * (static_cast<double>(i) / (n_bc + 1)));
    }
  }
}

}  // namespace flowmesher

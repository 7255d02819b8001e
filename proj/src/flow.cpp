#include "flowmesher/flow.hpp"

#include "flowmesher/delaunay.hpp"
#include "flowmesher/error.hpp"
#include "flowmesher/triangulate.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flowmesher {

double kernel(double q, double alpha) {
  if (q < 0.0) q = -q;
  if (q < 1.0) {
    const double a = 2.0 - q;
    const double b = 1.0 - q;
    return alpha * (a * a * a - 4.0 * b * b * b);
  }
  if (q < 2.0) {
    const double a = 2.0 - q;
    return alpha * a * a * a;
  }
  return 0.0;
}

double kernel_alpha(Dimension dimension) {
  return dimension == Dimension::Planar2D ? 1.0 / 6.0 : 1.0 / 18.0;
}

Vec3 repelling_force(int i, std::span<const int> neighbors, std::span<const Vec3> positions,
                     const SizeField& field, double k_s, double alpha) {
  Vec3 f = Vec3::Zero();
  const Vec3& xi = positions[i];
  const double hi = field.size_at(xi);
  for (int j : neighbors) {
    if (j == i) continue;
    const Vec3 d = xi - positions[j];
    const double r = d.norm();
    if (r == 0.0) {
      throw OverlapError(fmt::format("particles {} and {} occupy the same position", i, j));
    }
    const double h = 0.5 * (hi + field.size_at(positions[j]));
    if (r >= 2.0 * h) continue;
    f += kernel(r / h, alpha) * (d / r);
  }
  return k_s * f;
}

long update_target_count(long n_total, double e_avg, double k_p, double cap, double deadband) {
  if (std::abs(e_avg) <= deadband) return n_total;
  const double e = std::copysign(std::min(k_p * std::abs(e_avg), cap), e_avg);
  return static_cast<long>(std::ceil(static_cast<double>(n_total) * (1.0 + e) - 1e-9));
}

// ---------------------------------------------------------------------------
// Sources and count estimate

namespace {

double a0(double h) { return std::sqrt(3.0) / 4.0 * h * h; }
double v0(double h) { return h * h * h / (6.0 * std::numbers::sqrt2); }

double element_measure(const SimplexMesh& m, std::size_t e) {
  const auto el = m.element(e);
  if (m.dimension == Dimension::Planar2D) {
    return std::abs(signed_area_xy(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]]));
  }
  return std::abs(signed_volume(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]], m.nodes[el[3]]));
}

double element_threshold(Dimension d, double h) { return d == Dimension::Planar2D ? 6.0 * a0(h) : 18.0 * v0(h); }

}  // namespace

SimplexMesh source_mesh(const BoundaryIndex& index) {
  const MeshDomain& d = index.domain();
  if (d.is_planar()) {
    SimplexMesh m;
    m.dimension = Dimension::Planar2D;
    m.nodes = d.vertices;
    m.sync_flags();
    for (const auto& t : d.triangles) m.connectivity.insert(m.connectivity.end(), t.begin(), t.end());
    m.rebuild_edges();
    return m;
  }
  std::vector<Vec3> pts;
  for (std::size_t v = 0; v < d.vertices.size(); ++v) {
    if (d.on_boundary[v]) pts.push_back(d.vertices[v]);
  }
  return filter_to_domain(delaunay(pts, Dimension::Solid3D), index);
}

long estimate_initial_count(const MeshDomain& domain, const SizeField& field, const SimplexMesh& mesh) {
  double n = 0.0;
  if (field.is_uniform()) {
    const double h = field.h_min();
    n = domain.is_planar() ? domain.area / (6.0 * a0(h)) + domain.boundary_length / h
                           : domain.volume / (18.0 * v0(h)) + domain.surface_area / (6.0 * a0(h));
  } else {
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      n += element_measure(mesh, e) / element_threshold(domain.dimension, field.size_at(mesh.centroid(e)));
    }
    if (domain.is_planar()) {
      for (const auto& [a, b] : domain.boundary_edges) {
        const Vec3& pa = domain.vertices[a];
        const Vec3& pb = domain.vertices[b];
        n += (pb - pa).norm() / field.size_at(0.5 * (pa + pb));
      }
    } else {
      for (const auto& t : domain.triangles) {
        const Vec3& a = domain.vertices[t[0]];
        const Vec3& b = domain.vertices[t[1]];
        const Vec3& c = domain.vertices[t[2]];
        n += triangle_area(a, b, c) / (6.0 * a0(field.size_at((a + b + c) / 3.0)));
      }
    }
  }
  return std::max<long>(1, static_cast<long>(std::ceil(n - 1e-9)));
}

std::vector<Vec3> compute_sources(const SimplexMesh& mesh, const SizeField& field, const BoundaryIndex& index) {
  std::vector<Vec3> sources;
  double acc = 0.0;
  std::size_t largest = 0;
  double largest_measure = -1.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double m = element_measure(mesh, e);
    if (m > largest_measure) {
      largest_measure = m;
      largest = e;
    }
    const Vec3 c = mesh.centroid(e);
    acc += m;
    // Relative slack so an area of exactly 6 A_0 is not lost to round-off.
    if (acc >= element_threshold(mesh.dimension, field.size_at(c)) * (1.0 - 1e-12)) {
      acc = 0.0;
      if (index.side_of(c) != Side::Outside) sources.push_back(c);
    }
  }
  if (sources.empty() && mesh.num_elements() > 0) sources.push_back(mesh.centroid(largest));
  return sources;
}

// ---------------------------------------------------------------------------
// Simulation

FlowSimulation::FlowSimulation(const BoundaryIndex& index, const SizeField& field, FlowConfig config,
                               std::span<const Vec3> fixed_nodes)
    : index_(&index),
      field_(&field),
      config_(config),
      h_min_(field.h_min()),
      k_s_(config.k_s > 0.0 ? config.k_s : 0.1 * field.h_min()),
      alpha_(kernel_alpha(index.domain().dimension)),
      max_speed_(0.4 * 2.0 * field.h_min() / config.dt),
      injection_speed_(config.injection_speed > 0.0 ? config.injection_speed : 0.1 * field.h_min() / config.dt),
      rings_(std::max(1, static_cast<int>(std::ceil(field.h_max() / field.h_min() - 1e-12)))),
      rng_(config.seed),
      grid_(2.0 * field.h_min(), index.domain().dimension) {
  if (!(config_.k_v > 0.0 && config_.k_v < 1.0)) throw InputError("k_v must lie in (0, 1)");
  if (!(config_.dt > 0.0) || !(config_.mass > 0.0)) throw InputError("time step and mass must be positive");
  const bool planar = index.domain().is_planar();
  for (Vec3 p : fixed_nodes) {
    if (planar) p.z() = 0.0;
    if (index.side_of(p) == Side::Outside) {
      throw InputError(fmt::format("fixed node ({}, {}, {}) lies outside the domain", p.x(), p.y(), p.z()));
    }
    x_.push_back(p);
    v_.push_back(Vec3::Zero());
    fixed_.push_back(1);
  }
  const SimplexMesh smesh = source_mesh(index);
  sources_ = compute_sources(smesh, field, index);
  n_total_ = estimate_initial_count(index.domain(), field, smesh);
  rebuild_grid();
}

void FlowSimulation::set_particles(std::vector<Vec3> x, std::vector<Vec3> v, std::vector<std::uint8_t> fixed) {
  if (v.empty()) v.assign(x.size(), Vec3::Zero());
  if (fixed.empty()) fixed.assign(x.size(), 0);
  if (v.size() != x.size() || fixed.size() != x.size()) throw InputError("particle arrays differ in length");
  x_ = std::move(x);
  v_ = std::move(v);
  fixed_ = std::move(fixed);
  rebuild_grid();
}

void FlowSimulation::rebuild_grid() {
  grid_.clear();
  for (std::size_t i = 0; i < x_.size(); ++i) grid_.insert(static_cast<int>(i), x_[i]);
}

void FlowSimulation::manage_population() {
  const bool planar = index_->domain().is_planar();
  bool changed = false;
  if (n_particles() < n_total_) {
    for (const Vec3& s : sources_) {
      if (n_particles() >= n_total_) break;
      Vec3 dir;
      if (planar) {
        const double phi = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng_);
        dir = Vec3(std::cos(phi), std::sin(phi), 0.0);
      } else {
        const double z = std::uniform_real_distribution<double>(-1.0, 1.0)(rng_);
        const double phi = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng_);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        dir = Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
      }
      x_.push_back(s);
      v_.push_back(injection_speed_ * dir);
      fixed_.push_back(0);
      changed = true;
    }
  } else if (n_particles() > n_total_) {
    long excess = n_particles() - n_total_;
    for (long i = n_particles() - 1; i >= 0 && excess > 0; --i) {
      if (fixed_[i]) continue;
      x_.erase(x_.begin() + i);
      v_.erase(v_.begin() + i);
      fixed_.erase(fixed_.begin() + i);
      --excess;
    }
    changed = true;
  }
  if (changed) rebuild_grid();

  // Merge near-coincident particles, keeping the lowest index.
  const double tol = 1e-6 * h_min_;
  std::vector<char> drop(x_.size(), 0);
  std::vector<int> nb;
  bool any = false;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (fixed_[i]) continue;
    grid_.neighbors(x_[i], nb, 1);
    for (int j : nb) {
      if (static_cast<std::size_t>(j) >= i || drop[j]) continue;
      if ((x_[i] - x_[j]).norm() <= tol) {
        drop[i] = 1;
        any = true;
        break;
      }
    }
  }
  if (any) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (drop[i]) continue;
      x_[w] = x_[i];
      v_[w] = v_[i];
      fixed_[w] = fixed_[i];
      ++w;
    }
    x_.resize(w);
    v_.resize(w);
    fixed_.resize(w);
    rebuild_grid();
  }
}

void FlowSimulation::step() {
  const std::size_t n = x_.size();
  std::vector<Vec3> force(n, Vec3::Zero());
  std::vector<int> nb;
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed_[i]) continue;
    grid_.neighbors(x_[i], nb, rings_);
    force[i] = repelling_force(static_cast<int>(i), nb, x_, *field_, k_s_, alpha_) +
               viscous_force(v_[i], config_.mass, config_.dt, config_.k_v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed_[i]) {
      v_[i].setZero();
      continue;
    }
    const Vec3 old = x_[i];
    v_[i] += force[i] / config_.mass * config_.dt;
    const double speed = v_[i].norm();
    if (speed > max_speed_) v_[i] *= max_speed_ / speed;
    x_[i] += v_[i] * config_.dt;
    index_->enforce(x_[i], v_[i]);
    grid_.relocate(static_cast<int>(i), old, x_[i]);
  }
}

std::vector<std::uint8_t> FlowSimulation::boundary_flags() const {
  std::vector<std::uint8_t> flags(x_.size(), 0);
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const Projection p = index_->locate(x_[i]);
    flags[i] = p.distance <= 1e-3 * field_->size_at(x_[i]) ? 1 : 0;
  }
  return flags;
}

FlowResult FlowSimulation::run() {
  FlowResult result;
  bool n_status = false;
  double dd_max = 0.0;
  std::vector<Vec3> old;
  long t = 0;
  for (; t < config_.max_steps; ++t) {
    manage_population();
    old = x_;
    step();

    double dd = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) dd += (x_[i] - old[i]).norm();
    if (!x_.empty()) dd /= static_cast<double>(x_.size());
    dd_max = std::max(dd_max, dd);
    const double ratio = dd_max > 0.0 ? dd / dd_max : 0.0;
    result.last_ratio = ratio;

    if (ratio < config_.slow_ratio && n_particles() == n_total_ && !n_status) {
      ControllerEvent ev;
      ev.step = t;
      ev.n_particles = n_particles();
      ev.n_total_before = n_total_;
      ev.ratio = ratio;
      try {
        const SimplexMesh mesh = triangulate(x_, *index_);
        ev.e_avg = edge_length_error(mesh, *field_);
        n_total_ = update_target_count(n_total_, ev.e_avg, config_.k_p, config_.controller_cap, config_.deadband);
      } catch (const DegenerateInputError&) {
        ev.e_avg = std::numeric_limits<double>::quiet_NaN();
      } catch (const FilterError&) {
        ev.e_avg = std::numeric_limits<double>::quiet_NaN();
      }
      ev.n_total_after = n_total_;
      n_status = true;
      result.events.push_back(ev);
      if (config_.log) {
        fmt::print(*config_.log, "step {:6d}  N_p {:5d}  N_total {:5d} -> {:5d}  ratio {:.4f}  e_avg {:+.4f}\n",
                   ev.step, ev.n_particles, ev.n_total_before, ev.n_total_after, ev.ratio, ev.e_avg);
      }
    }
    if (ratio > config_.reset_ratio) n_status = false;
    if (ratio < config_.stop_ratio && n_particles() == n_total_) {
      result.converged = true;
      ++t;
      break;
    }
  }
  result.steps = t;
  result.n_total = n_total_;
  result.positions = x_;
  result.fixed = fixed_;
  result.boundary = boundary_flags();
  if (config_.log) {
    fmt::print(*config_.log, "{} after {} steps with {} particles (ratio {:.5f})\n",
               result.converged ? "converged" : "stopped at step cap", result.steps, x_.size(), result.last_ratio);
  }
  return result;
}

}  // namespace flowmesher

#pragma once

#include "flowmesher/containment.hpp"
#include "flowmesher/mesh.hpp"
#include "flowmesher/sizefield.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace flowmesher {

struct FlowConfig {
  double mass = 1.0;
  double k_s = 0.0;  // <= 0 selects 0.1 h_min
  double k_v = 0.08;
  double dt = 1.0;
  long max_steps = 20000;
  double k_p = 0.5;
  double controller_cap = 0.25;
  double deadband = 0.02;
  double slow_ratio = 0.05;
  double reset_ratio = 0.06;
  double stop_ratio = 0.005;
  double injection_speed = 0.0;  // <= 0 selects 0.1 h_min / dt
  std::uint64_t seed = 1;
  std::ostream* log = nullptr;  // controller events when set
};

/// W(q) with support [0, 2).
double kernel(double q, double alpha);
/// 1/6 in 2D, 1/18 in 3D.
double kernel_alpha(Dimension dimension);

/// k_s sum_j W(|xi - xj| / h_ij) (xi - xj) / |xi - xj|. Throws OverlapError
/// for a neighbour at the same position as particle i.
Vec3 repelling_force(int i, std::span<const int> neighbors, std::span<const Vec3> positions,
                     const SizeField& field, double k_s, double alpha);

inline Vec3 viscous_force(const Vec3& velocity, double mass, double dt, double k_v) {
  return -k_v * mass * velocity / dt;
}

/// Proportional update of the target count; unchanged inside the deadband.
long update_target_count(long n_total, double e_avg, double k_p, double cap = 0.25,
                         double deadband = 0.02);

/// Mesh used to place sources and estimate counts: the domain triangles in
/// 2D, a domain-filtered Delaunay tetrahedralization of the surface
/// vertices in 3D.
SimplexMesh source_mesh(const BoundaryIndex& index);

long estimate_initial_count(const MeshDomain& domain, const SizeField& field,
                            const SimplexMesh& source_mesh);

std::vector<Vec3> compute_sources(const SimplexMesh& source_mesh, const SizeField& field,
                                  const BoundaryIndex& index);

struct ControllerEvent {
  long step = 0;
  long n_particles = 0;
  long n_total_before = 0;
  long n_total_after = 0;
  double ratio = 0.0;
  double e_avg = 0.0;
};

struct FlowResult {
  std::vector<Vec3> positions;
  std::vector<std::uint8_t> boundary;
  std::vector<std::uint8_t> fixed;
  bool converged = false;
  long steps = 0;
  long n_total = 0;
  double last_ratio = 0.0;
  std::vector<ControllerEvent> events;
};

/// Particle system of Table-1 style flow meshing.
class FlowSimulation {
 public:
  FlowSimulation(const BoundaryIndex& index, const SizeField& field, FlowConfig config,
                 std::span<const Vec3> fixed_nodes = {});

  /// Injects at sources (one per source) while below target, removes the
  /// most recently injected particles while above, then merges particles
  /// closer than 1e-6 h_min keeping the lowest index.
  void manage_population();

  /// One semi-implicit Euler step with speed clamp and boundary enforcement.
  void step();

  /// Runs the full loop until convergence or the step cap.
  FlowResult run();

  /// Marks particles within 1e-3 of the local size from the boundary.
  std::vector<std::uint8_t> boundary_flags() const;

  std::span<const Vec3> positions() const { return x_; }
  std::span<const Vec3> velocities() const { return v_; }
  std::span<const std::uint8_t> fixed() const { return fixed_; }
  std::span<const Vec3> sources() const { return sources_; }
  long n_particles() const { return static_cast<long>(x_.size()); }
  long n_total() const { return n_total_; }
  void set_n_total(long n) { n_total_ = n; }
  double k_s() const { return k_s_; }
  double max_speed() const { return max_speed_; }
  const FlowConfig& config() const { return config_; }

  /// Replaces the particle set (for tests). Velocities default to zero.
  void set_particles(std::vector<Vec3> x, std::vector<Vec3> v, std::vector<std::uint8_t> fixed);

 private:
  void rebuild_grid();

  const BoundaryIndex* index_;
  const SizeField* field_;
  FlowConfig config_;
  double h_min_;
  double k_s_;
  double alpha_;
  double max_speed_;
  double injection_speed_;
  int rings_;
  std::mt19937_64 rng_;

  std::vector<Vec3> sources_;
  std::vector<Vec3> x_, v_;
  std::vector<std::uint8_t> fixed_;
  long n_total_ = 0;
  UniformGrid grid_;
};

}  // namespace flowmesher

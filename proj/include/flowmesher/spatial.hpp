#pragma once

#include "flowmesher/geometry.hpp"

#include <span>
#include <unordered_map>
#include <vector>

namespace flowmesher {

struct CellIndex {
  long long x = 0, y = 0, z = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct CellIndexHash {
  std::size_t operator()(const CellIndex& c) const noexcept {
    std::size_t h = static_cast<std::size_t>(c.x) * 73856093u;
    h ^= static_cast<std::size_t>(c.y) * 19349663u;
    h ^= static_cast<std::size_t>(c.z) * 83492791u;
    return h;
  }
};

/// Sparse uniform-cell index of integer ids by position.
///
/// Queries visit a (2k+1)^d block of cells around the query cell, where d is
/// 2 for planar grids (the z cell is ignored) and 3 otherwise.
class UniformGrid {
 public:
  UniformGrid() = default;
  UniformGrid(double cell_size, Dimension dimension, const Vec3& origin = Vec3::Zero());

  /// Indexes points[i] under id i.
  static UniformGrid build(std::span<const Vec3> points, double cell_size, Dimension dimension,
                           const Vec3& origin = Vec3::Zero());

  double cell_size() const { return cell_size_; }
  Dimension dimension() const { return dimension_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  CellIndex cell_of(const Vec3& p) const;

  void insert(int id, const Vec3& p);
  /// Throws ConsistencyError if id is not stored in p's cell.
  void remove(int id, const Vec3& p);
  void relocate(int id, const Vec3& from, const Vec3& to);
  void clear();

  /// Ids in the block of cells within `rings` of x's cell. The default block
  /// is a superset of every item within cell_size of x.
  std::vector<int> neighbors(const Vec3& x, int rings = 1) const;
  void neighbors(const Vec3& x, std::vector<int>& out, int rings = 1) const;

  /// Ids in cells exactly `ring` cells away (Chebyshev distance) from x's cell.
  void ring(const Vec3& x, int ring, std::vector<int>& out) const;

  const std::vector<int>* items(const CellIndex& c) const;

 private:
  double cell_size_ = 1.0;
  Dimension dimension_ = Dimension::Solid3D;
  Vec3 origin_ = Vec3::Zero();
  std::size_t count_ = 0;
  std::unordered_map<CellIndex, std::vector<int>, CellIndexHash> cells_;
};

}  // namespace flowmesher

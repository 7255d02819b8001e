#include "flowmesher/spatial.hpp"

#include "flowmesher/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace flowmesher {

UniformGrid::UniformGrid(double cell_size, Dimension dimension, const Vec3& origin)
    : cell_size_(cell_size), dimension_(dimension), origin_(origin) {
  if (!(cell_size > 0.0)) throw InputError("grid cell size must be positive");
}

UniformGrid UniformGrid::build(std::span<const Vec3> points, double cell_size, Dimension dimension,
                               const Vec3& origin) {
  UniformGrid grid(cell_size, dimension, origin);
  for (std::size_t i = 0; i < points.size(); ++i) grid.insert(static_cast<int>(i), points[i]);
  return grid;
}

CellIndex UniformGrid::cell_of(const Vec3& p) const {
  const Vec3 s = (p - origin_) / cell_size_;
  CellIndex c{static_cast<long long>(std::floor(s.x())), static_cast<long long>(std::floor(s.y())),
              static_cast<long long>(std::floor(s.z()))};
  if (dimension_ == Dimension::Planar2D) c.z = 0;
  return c;
}

void UniformGrid::insert(int id, const Vec3& p) {
  cells_[cell_of(p)].push_back(id);
  ++count_;
}

void UniformGrid::remove(int id, const Vec3& p) {
  auto it = cells_.find(cell_of(p));
  if (it != cells_.end()) {
    auto& list = it->second;
    auto pos = std::find(list.begin(), list.end(), id);
    if (pos != list.end()) {
      list.erase(pos);
      if (list.empty()) cells_.erase(it);
      --count_;
      return;
    }
  }
  throw ConsistencyError("grid item " + std::to_string(id) + " is not in the expected cell");
}

void UniformGrid::relocate(int id, const Vec3& from, const Vec3& to) {
  const CellIndex a = cell_of(from);
  const CellIndex b = cell_of(to);
  if (a == b) {
    const auto* list = items(a);
    if (list == nullptr || std::find(list->begin(), list->end(), id) == list->end()) {
      throw ConsistencyError("grid item " + std::to_string(id) + " is not in the expected cell");
    }
    return;
  }
  remove(id, from);
  insert(id, to);
}

void UniformGrid::clear() {
  cells_.clear();
  count_ = 0;
}

const std::vector<int>* UniformGrid::items(const CellIndex& c) const {
  auto it = cells_.find(c);
  return it == cells_.end() ? nullptr : &it->second;
}

std::vector<int> UniformGrid::neighbors(const Vec3& x, int rings) const {
  std::vector<int> out;
  neighbors(x, out, rings);
  return out;
}

void UniformGrid::neighbors(const Vec3& x, std::vector<int>& out, int rings) const {
  out.clear();
  if (cells_.empty()) return;
  const CellIndex c = cell_of(x);
  const long long rz = dimension_ == Dimension::Planar2D ? 0 : rings;
  for (long long dz = -rz; dz <= rz; ++dz) {
    for (long long dy = -rings; dy <= rings; ++dy) {
      for (long long dx = -rings; dx <= rings; ++dx) {
        if (const auto* list = items({c.x + dx, c.y + dy, c.z + dz})) {
          out.insert(out.end(), list->begin(), list->end());
        }
      }
    }
  }
}

void UniformGrid::ring(const Vec3& x, int ring, std::vector<int>& out) const {
  out.clear();
  const CellIndex c = cell_of(x);
  const long long rz = dimension_ == Dimension::Planar2D ? 0 : ring;
  auto visit = [&](long long dx, long long dy, long long dz) {
    if (const auto* list = items({c.x + dx, c.y + dy, c.z + dz})) out.insert(out.end(), list->begin(), list->end());
  };
  for (long long dz = -rz; dz <= rz; ++dz) {
    const bool cap = std::llabs(dz) == ring && dimension_ != Dimension::Planar2D;
    for (long long dy = -ring; dy <= ring; ++dy) {
      if (cap || std::llabs(dy) == ring) {
        for (long long dx = -ring; dx <= ring; ++dx) visit(dx, dy, dz);
      } else {
        visit(-ring, dy, dz);
        if (ring != 0) visit(ring, dy, dz);
      }
    }
  }
}

}  // namespace flowmesher

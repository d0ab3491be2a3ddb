#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "shrinker/mesh.hpp"

namespace shrinker {

/// Uniform-grid hash for tolerance lookups of 3D points.
class PointIndex {
 public:
  explicit PointIndex(double tol) : tol_(tol), cell_(2.0 * tol) {}

  /// Index of a stored point within `tol` of `p`, if any.
  std::optional<int> find(const Vec3& p) const {
    const auto c = cell_of(p);
    std::optional<int> best;
    double best_d = tol_;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find(key(c[0] + dx, c[1] + dy, c[2] + dz));
          if (it == cells_.end()) continue;
          for (int id : it->second) {
            const double d = (points_[id] - p).norm();
            if (d <= best_d) {
              best_d = d;
              best = id;
            }
          }
        }
    return best;
  }

  int insert(const Vec3& p) {
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    const auto c = cell_of(p);
    cells_[key(c[0], c[1], c[2])].push_back(id);
    return id;
  }

  int find_or_insert(const Vec3& p) {
    if (auto id = find(p)) return *id;
    return insert(p);
  }

  const std::vector<Vec3>& points() const { return points_; }

 private:
  std::array<std::int64_t, 3> cell_of(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() / cell_)),
            static_cast<std::int64_t>(std::floor(p.y() / cell_)),
            static_cast<std::int64_t>(std::floor(p.z() / cell_))};
  }
  static std::uint64_t key(std::int64_t x, std::int64_t y, std::int64_t z) {
    std::uint64_t h = static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(y) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(z) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
    return h;
  }

  double tol_;
  double cell_;
  std::vector<Vec3> points_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace shrinker

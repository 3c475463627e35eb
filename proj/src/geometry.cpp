#include "ccpp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccpp {

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

double shortest_arc(double from, double to) { return wrap_angle(to - from); }

double planar_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x() - b.x(), a.y() - b.y());
}

namespace {

std::int64_t pack(std::int64_t ix, std::int64_t iy, std::int64_t iz) {
  // 21 bits per axis, offset to keep indices positive.
  constexpr std::int64_t kOffset = 1 << 20;
  return ((ix + kOffset) << 42) | ((iy + kOffset) << 21) | (iz + kOffset);
}

}  // namespace

PointGrid::PointGrid(const std::vector<Vec3>& points, double cell)
    : points_(points), cell_(cell > 0 ? cell : 1.0) {
  for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
    cells_[key_of(points_[i])].push_back(i);
  }
}

std::int64_t PointGrid::key_of(const Vec3& p) const {
  return pack(static_cast<std::int64_t>(std::floor(p.x() / cell_)),
              static_cast<std::int64_t>(std::floor(p.y() / cell_)),
              static_cast<std::int64_t>(std::floor(p.z() / cell_)));
}

std::vector<int> PointGrid::query_ball(const Vec3& p, double radius) const {
  std::vector<int> out;
  if (points_.empty() || radius < 0) return out;
  const int span = static_cast<int>(std::ceil(radius / cell_));
  const std::int64_t cx = static_cast<std::int64_t>(std::floor(p.x() / cell_));
  const std::int64_t cy = static_cast<std::int64_t>(std::floor(p.y() / cell_));
  const std::int64_t cz = static_cast<std::int64_t>(std::floor(p.z() / cell_));
  const double r2 = radius * radius;
  for (std::int64_t ix = cx - span; ix <= cx + span; ++ix) {
    for (std::int64_t iy = cy - span; iy <= cy + span; ++iy) {
      for (std::int64_t iz = cz - span; iz <= cz + span; ++iz) {
        auto it = cells_.find(pack(ix, iy, iz));
        if (it == cells_.end()) continue;
        for (int idx : it->second) {
          if ((points_[idx] - p).squaredNorm() <= r2) out.push_back(idx);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool PointGrid::any_within(const Vec3& p, double radius) const {
  if (points_.empty()) return false;
  const int span = static_cast<int>(std::ceil(radius / cell_));
  const std::int64_t cx = static_cast<std::int64_t>(std::floor(p.x() / cell_));
  const std::int64_t cy = static_cast<std::int64_t>(std::floor(p.y() / cell_));
  const std::int64_t cz = static_cast<std::int64_t>(std::floor(p.z() / cell_));
  const double r2 = radius * radius;
  for (std::int64_t ix = cx - span; ix <= cx + span; ++ix) {
    for (std::int64_t iy = cy - span; iy <= cy + span; ++iy) {
      for (std::int64_t iz = cz - span; iz <= cz + span; ++iz) {
        auto it = cells_.find(pack(ix, iy, iz));
        if (it == cells_.end()) continue;
        for (int idx : it->second) {
          if ((points_[idx] - p).squaredNorm() <= r2) return true;
        }
      }
    }
  }
  return false;
}

double PointGrid::nearest_distance(const Vec3& p) const {
  if (points_.empty()) return std::numeric_limits<double>::infinity();
  double radius = cell_;
  for (;;) {
    auto hits = query_ball(p, radius);
    if (!hits.empty()) {
      double best = std::numeric_limits<double>::infinity();
      for (int idx : hits) best = std::min(best, (points_[idx] - p).norm());
      // A closer point can still hide just outside the search ball.
      if (best <= radius) {
        auto refine = query_ball(p, best);
        for (int idx : refine) best = std::min(best, (points_[idx] - p).norm());
        return best;
      }
      radius = best;
      continue;
    }
    radius *= 2.0;
  }
}

}  // namespace ccpp

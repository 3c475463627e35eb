#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace ccpp {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Normalize an angle to (-pi, pi].
double wrap_angle(double a);

/// Shortest signed arc taking `from` to `to`, in (-pi, pi].
double shortest_arc(double from, double to);

/// Distance between the (x, y) projections of two points.
double planar_distance(const Vec3& a, const Vec3& b);

/// Uniform hash grid over a fixed point set, for radius and nearest queries.
class PointGrid {
 public:
  PointGrid(const std::vector<Vec3>& points, double cell);

  /// Indices of all points within `radius` of `p`, ascending.
  std::vector<int> query_ball(const Vec3& p, double radius) const;

  bool any_within(const Vec3& p, double radius) const;

  /// Distance to the nearest point; +inf for an empty set.
  double nearest_distance(const Vec3& p) const;

  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Vec3> points_;
  double cell_;
  std::unordered_map<std::int64_t, std::vector<int>> cells_;

  std::int64_t key_of(const Vec3& p) const;
};

}  // namespace ccpp

#pragma once

#include <string>
#include <vector>

#include "ccpp/topology.hpp"

namespace ccpp {

/// One inspection waypoint: offset position, structure-facing yaw and the
/// radial angle used for traversal ordering.
struct Waypoint {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;           // radians, (-pi, pi], camera faces the loop
  double radial_angle = 0.0;  // theta about the loop center, (-pi, pi]
  int loop_id = 0;
  int slice_index = 0;
  Vec3 source = Vec3::Zero();  // surface point this waypoint inspects
  bool flagged = false;        // clearance below omega * (1 - slack)
};

/// Ordered offset waypoints for one loop at one slice height.
struct OffsetLoop {
  std::vector<Waypoint> waypoints;  // radial_angle strictly ascending
  Vec2 center = Vec2::Zero();
  int slice_index = 0;
  int loop_id = 0;
  /// Loop points coinciding with the center (theta undefined, skipped).
  int skipped_points = 0;

  double circumference() const;
};

/// Map each surface point radially outward by omega about the loop center,
/// sort counter-clockwise and thin to a spacing >= thin_pitch. Waypoints
/// whose clearance to the loop's own points falls below
/// omega * (1 - kClearanceSlack) are flagged, not repaired.
OffsetLoop build_offset_loop(const Loop& loop, double omega, double thin_pitch,
                             int slice_index, int loop_id);

inline constexpr double kClearanceSlack = 0.25;

/// Debug dump: offset_<slice>_<loop>.txt with "x y z yaw" rows.
void dump_offset_loop(const OffsetLoop& loop, const std::string& dir);

}  // namespace ccpp

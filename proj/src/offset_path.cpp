#include "ccpp/offset_path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ccpp/errors.hpp"

namespace ccpp {

double OffsetLoop::circumference() const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
    total += (waypoints[i + 1].position - waypoints[i].position).norm();
  if (waypoints.size() > 2)
    total += (waypoints.front().position - waypoints.back().position).norm();
  return total;
}

OffsetLoop build_offset_loop(const Loop& loop, double omega, double thin_pitch,
                             int slice_index, int loop_id) {
  if (!(omega > 0.0))
    throw ValidationError("offset", "omega must be > 0");
  if (loop.points.size() < 3)
    throw ValidationError("offset", "loop needs at least 3 points, got " +
                                        std::to_string(loop.points.size()));

  OffsetLoop out;
  out.center = loop.center;
  out.slice_index = slice_index;
  out.loop_id = loop_id;

  std::vector<Waypoint> raw;
  raw.reserve(loop.points.size());
  for (std::size_t i = 0; i < loop.points.size(); ++i) {
    const Vec3& p = loop.points[i];
    const Vec2 radial(p.x() - loop.center.x(), p.y() - loop.center.y());
    if (radial.norm() < 1e-12) {
      ++out.skipped_points;  // theta undefined at the center
      continue;
    }
    const double theta = loop.radial_angles[i];
    Waypoint w;
    w.source = p;
    w.position = Vec3(p.x() + omega * std::cos(theta),
                      p.y() + omega * std::sin(theta), p.z());
    w.radial_angle = theta;
    w.yaw = wrap_angle(theta + M_PI);
    w.loop_id = loop_id;
    w.slice_index = slice_index;
    raw.push_back(w);
  }
  if (raw.size() < 3)
    throw ValidationError("offset", "loop degenerates to fewer than 3 usable points");

  std::sort(raw.begin(), raw.end(), [](const Waypoint& a, const Waypoint& b) {
    if (a.radial_angle != b.radial_angle) return a.radial_angle < b.radial_angle;
    // Duplicate angles: keep a deterministic order by distance from center.
    return a.position.squaredNorm() < b.position.squaredNorm();
  });

  // Thin to spacing >= thin_pitch and drop duplicate angles so radial_angle
  // is strictly increasing along the loop.
  std::vector<Waypoint>& wps = out.waypoints;
  for (const Waypoint& w : raw) {
    if (!wps.empty()) {
      if (w.radial_angle - wps.back().radial_angle < 1e-12) continue;
      if (planar_distance(w.position, wps.back().position) < thin_pitch) continue;
    }
    wps.push_back(w);
  }
  // The loop closes on itself: keep the seam gap at least thin_pitch too.
  while (wps.size() > 3 &&
         planar_distance(wps.back().position, wps.front().position) < thin_pitch)
    wps.pop_back();

  // Clearance check against the loop's own surface points.
  const double clearance_floor = omega * (1.0 - kClearanceSlack);
  for (Waypoint& w : wps) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Vec3& p : loop.points)
      nearest = std::min(nearest, planar_distance(w.position, p));
    if (nearest < clearance_floor) w.flagged = true;
  }
  return out;
}

void dump_offset_loop(const OffsetLoop& loop, const std::string& dir) {
  char name[128];
  std::snprintf(name, sizeof(name), "%s/offset_%d_%d.txt", dir.c_str(),
                loop.slice_index, loop.loop_id);
  std::ofstream out(name);
  if (!out) throw IoError("offset", std::string("cannot write ") + name);
  char buf[160];
  for (const Waypoint& w : loop.waypoints) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %.9g\n", w.position.x(),
                  w.position.y(), w.position.z(), w.yaw);
    out << buf;
  }
}

}  // namespace ccpp

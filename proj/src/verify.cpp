#include "ccpp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ccpp/errors.hpp"

namespace ccpp {

SafetyResult check_safety(const std::vector<Trajectory>& trajectories,
                          double d_s) {
  SafetyResult result;
  result.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < trajectories.size(); ++a) {
    for (std::size_t b = a + 1; b < trajectories.size(); ++b) {
      const auto& sa = trajectories[a].samples;
      const auto& sb = trajectories[b].samples;
      const std::size_t steps = std::min(sa.size(), sb.size());
      for (std::size_t i = 0; i < steps; ++i) {
        const bool same_branch = sa[i].branch_id < 0 || sb[i].branch_id < 0 ||
                                 sa[i].branch_id == sb[i].branch_id;
        if (!same_branch) continue;
        const double d = planar_distance(sa[i].position, sb[i].position);
        result.min_distance = std::min(result.min_distance, d);
        if (d < d_s)
          result.violations.push_back({sa[i].t,
                                       trajectories[a].agent_id,
                                       trajectories[b].agent_id, "safety"});
      }
    }
  }
  return result;
}

namespace {

bool line_of_sight_clear(const PointGrid& grid, const std::vector<Vec3>& pts,
                         const Vec3& eye, const Vec3& target,
                         double occlusion_radius) {
  const Vec3 dir = target - eye;
  const double range = dir.norm();
  if (range < occlusion_radius) return true;
  const Vec3 unit = dir / range;
  const double step = occlusion_radius;
  // Points in the target's own neighborhood are the surface being looked
  // at, not an occluder; everything else near the ray blocks the view.
  const double guard = 3.0 * occlusion_radius;
  for (double d = step; d < range - occlusion_radius; d += step) {
    const Vec3 probe = eye + unit * d;
    for (int idx : grid.query_ball(probe, occlusion_radius)) {
      if ((pts[idx] - target).norm() > guard) return false;
    }
  }
  return true;
}

}  // namespace

CoverageReport check_coverage(const StructureModel& model,
                              const std::vector<Trajectory>& trajectories,
                              double alpha, double r_max,
                              double occlusion_radius, double camera_tilt) {
  CoverageReport report;
  report.min_inter_agent_distance = std::numeric_limits<double>::infinity();
  report.min_structure_clearance = std::numeric_limits<double>::infinity();
  if (model.points.empty()) return report;

  PointGrid grid(model.points, std::max(occlusion_radius, 1e-3));
  const double cos_alpha = std::cos(alpha);

  std::size_t covered = 0;
  for (const Vec3& p : model.points) {
    bool seen = false;
    for (const Trajectory& traj : trajectories) {
      for (const TrajectorySample& s : traj.samples) {
        const Vec3 los = p - s.position;
        const double range = los.norm();
        if (range > r_max) continue;
        const Vec3 axis(std::cos(s.yaw) * std::cos(camera_tilt),
                        std::sin(s.yaw) * std::cos(camera_tilt),
                        -std::sin(camera_tilt));
        if (range > 1e-12 && los.dot(axis) / range < cos_alpha) continue;
        if (!line_of_sight_clear(grid, model.points, s.position, p,
                                 occlusion_radius))
          continue;
        seen = true;
        break;
      }
      if (seen) break;
    }
    if (seen)
      ++covered;
    else
      report.uncovered_points.push_back(p);
  }
  report.covered_fraction =
      static_cast<double>(covered) / static_cast<double>(model.points.size());
  return report;
}

double check_clearance(const StructureModel& model,
                       const std::vector<Trajectory>& trajectories,
                       double threshold, std::vector<Violation>* violations) {
  PointGrid grid(model.points, std::max(threshold, 1e-3));
  double min_clearance = std::numeric_limits<double>::infinity();
  for (const Trajectory& traj : trajectories) {
    for (const TrajectorySample& s : traj.samples) {
      const double d = grid.nearest_distance(s.position);
      min_clearance = std::min(min_clearance, d);
      if (violations && d < threshold)
        violations->push_back({s.t, traj.agent_id, -1, "clearance"});
    }
  }
  return min_clearance;
}

CoverageReport verify_mission(const StructureModel& model,
                              const std::vector<Trajectory>& trajectories,
                              const PlannerConfig& cfg) {
  CoverageReport report = check_coverage(model, trajectories, cfg.alpha,
                                         cfg.r_max, cfg.sample_pitch);
  SafetyResult safety = check_safety(trajectories, cfg.d_s);
  report.min_inter_agent_distance = safety.min_distance;
  report.violations = std::move(safety.violations);
  report.min_structure_clearance =
      check_clearance(model, trajectories, cfg.d_s, &report.violations);
  for (const Trajectory& t : trajectories)
    report.per_agent_duration.push_back(
        t.samples.empty() ? 0.0 : (t.samples.size() - 1) * cfg.t_s);
  return report;
}

void export_plot_data(const CoverageReport& report,
                      const std::vector<Trajectory>& trajectories,
                      const std::string& out_dir) {
  auto open = [&](const std::string& name) {
    std::ofstream out(out_dir + "/" + name);
    if (!out)
      throw IoError("verify", "cannot write " + out_dir + "/" + name);
    return out;
  };
  char buf[160];
  for (const Trajectory& traj : trajectories) {
    auto path = open("path_agent_" + std::to_string(traj.agent_id) + ".txt");
    path << "# x y z\n";
    auto yaw = open("yaw_agent_" + std::to_string(traj.agent_id) + ".txt");
    yaw << "# t yaw\n";
    for (const TrajectorySample& s : traj.samples) {
      std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", s.position.x(),
                    s.position.y(), s.position.z());
      path << buf;
      std::snprintf(buf, sizeof(buf), "%.9g %.9g\n", s.t, s.yaw);
      yaw << buf;
    }
  }
  auto uncovered = open("uncovered.txt");
  uncovered << "# x y z\n";
  for (const Vec3& p : report.uncovered_points) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p.x(), p.y(), p.z());
    uncovered << buf;
  }
}

void write_report(const CoverageReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("verify", "cannot write " + path);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "covered_fraction = %.9g\n",
                report.covered_fraction);
  out << buf;
  std::snprintf(buf, sizeof(buf), "min_inter_agent_distance = %.9g\n",
                report.min_inter_agent_distance);
  out << buf;
  std::snprintf(buf, sizeof(buf), "min_structure_clearance = %.9g\n",
                report.min_structure_clearance);
  out << buf;
  for (std::size_t i = 0; i < report.per_agent_duration.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "duration_s[%zu] = %.9g\n", i,
                  report.per_agent_duration[i]);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "violations = %zu\n",
                report.violations.size());
  out << buf;
  for (const Violation& v : report.violations) {
    std::snprintf(buf, sizeof(buf), "violation %s t=%.9g agents=%d,%d\n",
                  v.kind.c_str(), v.t, v.agent_a, v.agent_b);
    out << buf;
  }
}

}  // namespace ccpp

#pragma once

#include <string>
#include <vector>

#include "ccpp/mission.hpp"
#include "ccpp/model.hpp"

namespace ccpp {

struct Violation {
  double t = 0.0;
  int agent_a = -1;
  int agent_b = -1;  // -1 for single-agent violations (clearance)
  std::string kind;  // "safety" or "clearance"
};

struct CoverageReport {
  double covered_fraction = 0.0;
  std::vector<Vec3> uncovered_points;
  double min_inter_agent_distance = 0.0;
  double min_structure_clearance = 0.0;
  std::vector<double> per_agent_duration;
  std::vector<Violation> violations;
};

struct SafetyResult {
  double min_distance = 0.0;  // +inf when no pair shares a branch
  std::vector<Violation> violations;
};

/// Planar separation of every agent pair at every common time index where
/// both fly the same branch. Samples without branch information (branch_id
/// < 0) are compared against everything.
SafetyResult check_safety(const std::vector<Trajectory>& trajectories,
                          double d_s);

/// A surface point is covered when some trajectory sample sees it within
/// r_max and within `alpha` of the camera axis (horizontal along the yaw,
/// optionally tilted down by camera_tilt), with no other model point within
/// occlusion_radius of the line of sight at a strictly smaller range.
CoverageReport check_coverage(const StructureModel& model,
                              const std::vector<Trajectory>& trajectories,
                              double alpha, double r_max,
                              double occlusion_radius,
                              double camera_tilt = 0.0);

/// Minimum 3D distance from any trajectory sample to the model, with
/// violations below `threshold`.
double check_clearance(const StructureModel& model,
                       const std::vector<Trajectory>& trajectories,
                       double threshold, std::vector<Violation>* violations);

/// Full post-hoc verification: safety + clearance + coverage in one report.
CoverageReport verify_mission(const StructureModel& model,
                              const std::vector<Trajectory>& trajectories,
                              const PlannerConfig& cfg);

/// Per-agent path polylines ("x y z"), yaw-vs-time series ("t value") and
/// the uncovered point set, as ASCII tables.
void export_plot_data(const CoverageReport& report,
                      const std::vector<Trajectory>& trajectories,
                      const std::string& out_dir);

/// Report as "key = value" text (covered_fraction, min_inter_agent_distance,
/// min_structure_clearance, duration_s[i], violation lines).
void write_report(const CoverageReport& report, const std::string& path);

}  // namespace ccpp

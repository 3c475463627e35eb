#pragma once

#include <cstdint>
#include <vector>

#include "ccpp/geometry.hpp"

namespace ccpp {

/// Dense 3D point set describing the inspection target surface.
struct StructureModel {
  enum class Source { point_set, mesh };

  std::vector<Vec3> points;
  Vec3 min_bound = Vec3::Zero();
  Vec3 max_bound = Vec3::Zero();
  Source source = Source::point_set;
  /// Zero-area faces skipped during mesh densification.
  int skipped_degenerate_faces = 0;

  void recompute_bounds();
  double vertical_extent() const { return max_bound.z() - min_bound.z(); }
};

/// Planner parameters. Angles are stored in radians.
struct PlannerConfig {
  double alpha = 0.0;       // sensor aperture angle
  double r_max = 0.0;       // sensor max range (m)
  double omega = 0.0;       // offset distance from the surface (m)
  double d_min = 0.0;       // connectivity threshold (m)
  double d_s = 0.0;         // inter-agent safety distance (m)
  int n_agents = 1;
  double v_d = 0.0;         // desired speed (m/s)
  double t_s = 0.0;         // controller sampling time (s)
  double sample_pitch = 0.0;  // mesh densification spacing (m)
  std::uint64_t seed = 0;

  /// Slice plane spacing, (omega / 2) * tan(alpha).
  double delta_lambda() const;
  /// Trajectory step size h = t_s * v_d.
  double step() const { return t_s * v_d; }

  /// Throws ValidationError on the first out-of-range parameter.
  void validate() const;
};

}  // namespace ccpp

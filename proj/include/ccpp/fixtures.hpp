#pragma once

#include <string>

#include "ccpp/model.hpp"

namespace ccpp::fixtures {

/// Analytic test structures, surface-sampled at a fixed pitch. The point
/// sets are deterministic functions of the dimensions and every point lies
/// exactly on the declared surface.
struct FixtureSpec {
  enum class Kind { cylinder, pillars, boxes, turbine };
  Kind kind = Kind::cylinder;
  double sample_pitch = 0.0;  // 0 selects the per-kind default

  // cylinder
  double radius = 2.8;
  double height = 10.1;
  // pillars (two cylinders of pillar_radius/pillar_height, centers
  // `separation` apart on the x axis)
  double pillar_radius = 0.5;
  double pillar_height = 5.0;
  double separation = 5.0;
  // boxes: a 1 x 2 x 3 stack of 0.57 x 0.40 x 0.30 boxes -> one prism
  double box_w = 0.57, box_d = 0.40, box_h = 0.30;
  // turbine: tower + nacelle + three blades 120 deg apart, tilted 45 deg up
  double tower_radius = 0.5, tower_height = 6.0;
  double nacelle_radius = 0.7, nacelle_height = 0.5;
  double blade_length = 3.4, blade_radius = 0.12;
  // Blades start this far from the hub center: wide enough that every slice
  // through the blades yields three branches a drone can circle at the
  // working offset without approaching the other two.
  double blade_root = 1.6;
};

/// Surface point set for `spec` (lateral surfaces only).
StructureModel generate(const FixtureSpec& spec);

/// Spec for a fixture by name ("cylinder", "pillars", "boxes", "turbine"),
/// with pitch 0 meaning the per-kind default.
FixtureSpec spec_by_name(const std::string& name, double pitch = 0.0);

/// Planner configuration tuned for the named fixture.
PlannerConfig config_by_name(const std::string& name, int n_agents,
                             std::uint64_t seed = 42);

}  // namespace ccpp::fixtures

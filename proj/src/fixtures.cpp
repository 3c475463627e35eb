#include "ccpp/fixtures.hpp"

#include <cmath>
#include <vector>

#include "ccpp/errors.hpp"

namespace ccpp::fixtures {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0))
    throw ValidationError("fixtures", std::string(name) + " must be > 0");
}

/// Lateral surface of an upright cylinder: rings every `pitch` in z
/// (including both ends), points every ~`pitch` along each ring.
void add_cylinder(std::vector<Vec3>& out, const Vec2& center, double z0,
                  double z1, double radius, double pitch) {
  const int n_az =
      std::max(3, static_cast<int>(std::ceil(2.0 * M_PI * radius / pitch)));
  const int n_z = static_cast<int>(std::floor((z1 - z0) / pitch + 1e-9));
  for (int k = 0; k <= n_z + 1; ++k) {
    const double z = (k <= n_z) ? z0 + k * pitch : z1;
    if (k == n_z + 1 && z1 - (z0 + n_z * pitch) < 1e-9) break;
    for (int j = 0; j < n_az; ++j) {
      const double phi = 2.0 * M_PI * j / n_az;
      out.emplace_back(center.x() + radius * std::cos(phi),
                       center.y() + radius * std::sin(phi), z);
    }
  }
}

/// Lateral surface of a tilted cylinder of length L about axis `dir` from
/// `base` (rings perpendicular to the axis).
void add_tilted_cylinder(std::vector<Vec3>& out, const Vec3& base,
                         const Vec3& dir, double length, double radius,
                         double pitch) {
  const Vec3 u = dir.normalized();
  Vec3 ref = std::abs(u.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 e1 = u.cross(ref).normalized();
  const Vec3 e2 = u.cross(e1);
  const int n_az =
      std::max(3, static_cast<int>(std::ceil(2.0 * M_PI * radius / pitch)));
  const int n_s = static_cast<int>(std::floor(length / pitch + 1e-9));
  for (int k = 0; k <= n_s; ++k) {
    const Vec3 c = base + u * (k * pitch);
    for (int j = 0; j < n_az; ++j) {
      const double phi = 2.0 * M_PI * j / n_az;
      out.push_back(c + radius * (std::cos(phi) * e1 + std::sin(phi) * e2));
    }
  }
}

/// Lateral surface of an axis-aligned rectangular prism centered on (cx, cy):
/// the four walls, sampled every `pitch` along the perimeter and in z.
void add_prism(std::vector<Vec3>& out, double cx, double cy, double z0,
               double z1, double sx, double sy, double pitch) {
  const double hx = sx / 2.0, hy = sy / 2.0;
  std::vector<Vec2> ring;
  auto add_side = [&](const Vec2& a, const Vec2& b) {
    const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / pitch)));
    for (int i = 0; i < n; ++i)  // endpoint is the next side's corner
      ring.emplace_back(a + (b - a) * (static_cast<double>(i) / n));
  };
  const Vec2 c00(cx - hx, cy - hy), c10(cx + hx, cy - hy);
  const Vec2 c11(cx + hx, cy + hy), c01(cx - hx, cy + hy);
  add_side(c00, c10);
  add_side(c10, c11);
  add_side(c11, c01);
  add_side(c01, c00);

  const int n_z = static_cast<int>(std::floor((z1 - z0) / pitch + 1e-9));
  for (int k = 0; k <= n_z + 1; ++k) {
    const double z = (k <= n_z) ? z0 + k * pitch : z1;
    if (k == n_z + 1 && z1 - (z0 + n_z * pitch) < 1e-9) break;
    for (const Vec2& p : ring) out.emplace_back(p.x(), p.y(), z);
  }
}

}  // namespace

StructureModel generate(const FixtureSpec& spec) {
  StructureModel model;
  double pitch = spec.sample_pitch;
  switch (spec.kind) {
    case FixtureSpec::Kind::cylinder: {
      if (pitch <= 0.0) pitch = 0.2;
      require_positive(spec.radius, "radius");
      require_positive(spec.height, "height");
      add_cylinder(model.points, Vec2::Zero(), 0.0, spec.height, spec.radius,
                   pitch);
      break;
    }
    case FixtureSpec::Kind::pillars: {
      if (pitch <= 0.0) pitch = 0.1;
      require_positive(spec.pillar_radius, "pillar_radius");
      require_positive(spec.pillar_height, "pillar_height");
      require_positive(spec.separation, "separation");
      const double half = spec.separation / 2.0;
      add_cylinder(model.points, Vec2(-half, 0.0), 0.0, spec.pillar_height,
                   spec.pillar_radius, pitch);
      add_cylinder(model.points, Vec2(half, 0.0), 0.0, spec.pillar_height,
                   spec.pillar_radius, pitch);
      break;
    }
    case FixtureSpec::Kind::boxes: {
      if (pitch <= 0.0) pitch = 0.05;
      require_positive(spec.box_w, "box_w");
      require_positive(spec.box_d, "box_d");
      require_positive(spec.box_h, "box_h");
      // Six boxes stacked 1 wide x 2 deep x 3 high form one prism.
      add_prism(model.points, 0.0, 0.0, 0.0, 3.0 * spec.box_h, spec.box_w,
                2.0 * spec.box_d, pitch);
      break;
    }
    case FixtureSpec::Kind::turbine: {
      if (pitch <= 0.0) pitch = 0.1;
      require_positive(spec.tower_radius, "tower_radius");
      require_positive(spec.tower_height, "tower_height");
      require_positive(spec.nacelle_radius, "nacelle_radius");
      require_positive(spec.nacelle_height, "nacelle_height");
      require_positive(spec.blade_length, "blade_length");
      require_positive(spec.blade_radius, "blade_radius");
      add_cylinder(model.points, Vec2::Zero(), 0.0, spec.tower_height,
                   spec.tower_radius, pitch);
      add_cylinder(model.points, Vec2::Zero(), spec.tower_height,
                   spec.tower_height + spec.nacelle_height, spec.nacelle_radius,
                   pitch);
      // Blades fan out of the hub at 120 degree azimuths, tilted 45 degrees
      // above horizontal, so slices well above the hub cut three separate
      // branches while slices below cut only the tower. The root stand-off
      // keeps blade roots clear of the nacelle so every slice above the hub
      // separates cleanly into three components.
      const Vec3 hub(0.0, 0.0, spec.tower_height + spec.nacelle_height / 2.0);
      const double c45 = std::sqrt(0.5);
      for (int b = 0; b < 3; ++b) {
        const double az = M_PI / 2.0 + b * 2.0 * M_PI / 3.0;
        const Vec3 dir(std::cos(az) * c45, std::sin(az) * c45, c45);
        add_tilted_cylinder(model.points, hub + dir * spec.blade_root, dir,
                            spec.blade_length, spec.blade_radius, pitch);
      }
      break;
    }
  }
  model.source = StructureModel::Source::point_set;
  model.recompute_bounds();
  return model;
}

FixtureSpec spec_by_name(const std::string& name, double pitch) {
  FixtureSpec spec;
  spec.sample_pitch = pitch;
  if (name == "cylinder")
    spec.kind = FixtureSpec::Kind::cylinder;
  else if (name == "pillars")
    spec.kind = FixtureSpec::Kind::pillars;
  else if (name == "boxes")
    spec.kind = FixtureSpec::Kind::boxes;
  else if (name == "turbine")
    spec.kind = FixtureSpec::Kind::turbine;
  else
    throw ValidationError("fixtures", "unknown fixture: " + name);
  return spec;
}

PlannerConfig config_by_name(const std::string& name, int n_agents,
                             std::uint64_t seed) {
  PlannerConfig cfg;
  cfg.n_agents = n_agents;
  cfg.seed = seed;
  if (name == "cylinder") {
    cfg.alpha = M_PI / 3.0;
    cfg.r_max = 4.0;
    cfg.omega = 1.5;
    cfg.d_min = 0.5;
    cfg.d_s = 1.0;
    cfg.v_d = 0.5;
    cfg.t_s = 1.0;
    cfg.sample_pitch = 0.2;
  } else if (name == "pillars") {
    cfg.alpha = M_PI / 3.0;
    cfg.r_max = 2.5;
    cfg.omega = 0.8;
    cfg.d_min = 0.4;
    cfg.d_s = 0.6;
    cfg.v_d = 0.4;
    cfg.t_s = 1.0;
    cfg.sample_pitch = 0.1;
  } else if (name == "boxes") {
    cfg.alpha = M_PI / 4.0;
    cfg.r_max = 1.5;
    cfg.omega = 0.4;
    cfg.d_min = 0.15;
    cfg.d_s = 0.3;
    cfg.v_d = 0.2;
    cfg.t_s = 0.5;
    cfg.sample_pitch = 0.05;
  } else if (name == "turbine") {
    cfg.alpha = M_PI / 3.0;
    cfg.r_max = 2.5;
    cfg.omega = 0.8;
    cfg.d_min = 0.35;
    cfg.d_s = 0.5;
    cfg.v_d = 0.5;
    cfg.t_s = 1.0;
    cfg.sample_pitch = 0.1;
  } else {
    throw ValidationError("fixtures", "unknown fixture: " + name);
  }
  cfg.validate();
  return cfg;
}

}  // namespace ccpp::fixtures

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <queue>

#include "ccpp/errors.hpp"
#include "ccpp/fixtures.hpp"
#include "ccpp/slicer.hpp"
#include "ccpp/topology.hpp"
#include "doctest.h"

using namespace ccpp;

namespace {

/// Independent component count: breadth-first search on planar proximity.
int bfs_components(const std::vector<Vec3>& pts, double d_min) {
  const int n = static_cast<int>(pts.size());
  std::vector<bool> seen(n, false);
  int components = 0;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++components;
    std::queue<int> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v)
        if (!seen[v] && planar_distance(pts[u], pts[v]) < d_min) {
          seen[v] = true;
          q.push(v);
        }
    }
  }
  return components;
}

}  // namespace

TEST_CASE("cylinder: every point lies exactly on the surface") {
  auto spec = fixtures::spec_by_name("cylinder");
  StructureModel m = fixtures::generate(spec);
  CHECK(m.points.size() > 1000);
  for (const Vec3& p : m.points) {
    CHECK(std::abs(std::hypot(p.x(), p.y()) - 2.8) < 1e-9);
    CHECK(p.z() >= -1e-12);
    CHECK(p.z() <= 10.1 + 1e-12);
  }
  CHECK(m.min_bound.z() == doctest::Approx(0.0));
  CHECK(m.max_bound.z() == doctest::Approx(10.1));  // top ring is forced
}

TEST_CASE("pillars: two well-separated columns") {
  StructureModel m = fixtures::generate(fixtures::spec_by_name("pillars"));
  for (const Vec3& p : m.points) {
    const double left = std::hypot(p.x() + 2.5, p.y());
    const double right = std::hypot(p.x() - 2.5, p.y());
    CHECK(std::min(std::abs(left - 0.5), std::abs(right - 0.5)) < 1e-9);
  }
  auto cfg = fixtures::config_by_name("pillars", 1);
  auto slices = slice_model(m, cfg.delta_lambda());
  for (const Slice& s : slices) {
    if (s.empty()) continue;
    Slice merged = merge_near_points(s, cfg.d_min);
    CHECK(count_loops(merged, cfg.d_min) == 2);
    CHECK(bfs_components(merged.points, cfg.d_min) == 2);
  }
}

TEST_CASE("boxes: stack forms one prism with the combined dimensions") {
  StructureModel m = fixtures::generate(fixtures::spec_by_name("boxes"));
  // 1 x 2 x 3 stack of 0.57 x 0.40 x 0.30 boxes.
  CHECK(m.min_bound.x() == doctest::Approx(-0.285));
  CHECK(m.max_bound.x() == doctest::Approx(0.285));
  CHECK(m.min_bound.y() == doctest::Approx(-0.40));
  CHECK(m.max_bound.y() == doctest::Approx(0.40));
  CHECK(m.min_bound.z() == doctest::Approx(0.0));
  CHECK(m.max_bound.z() == doctest::Approx(0.90));
  // Walls only: every point sits on the perimeter rectangle.
  for (const Vec3& p : m.points) {
    const bool on_x = std::abs(std::abs(p.x()) - 0.285) < 1e-9;
    const bool on_y = std::abs(std::abs(p.y()) - 0.40) < 1e-9;
    CHECK((on_x || on_y));
  }
}

TEST_CASE("turbine: one loop at the tower, three across the blades") {
  StructureModel m = fixtures::generate(fixtures::spec_by_name("turbine"));
  auto cfg = fixtures::config_by_name("turbine", 1);
  auto slices = slice_model(m, cfg.delta_lambda());
  REQUIRE(slices.size() >= 10);

  bool saw_tower = false, saw_blades = false;
  for (const Slice& s : slices) {
    if (s.empty()) continue;
    Slice merged = merge_near_points(s, cfg.d_min);
    const int k = count_loops(merged, cfg.d_min);
    CHECK(k == bfs_components(merged.points, cfg.d_min));
    if (s.lambda < 6.3) {
      CHECK(k == 1);  // tower / nacelle region
      saw_tower = true;
    } else if (s.lambda >= 7.5) {
      CHECK(k == 3);  // three separated blades
      saw_blades = true;
    }
  }
  CHECK(saw_tower);
  CHECK(saw_blades);
}

TEST_CASE("generation is deterministic") {
  StructureModel a = fixtures::generate(fixtures::spec_by_name("turbine"));
  StructureModel b = fixtures::generate(fixtures::spec_by_name("turbine"));
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i)
    CHECK(a.points[i] == b.points[i]);
}

TEST_CASE("invalid specs and names are rejected") {
  auto spec = fixtures::spec_by_name("cylinder");
  spec.radius = 0.0;
  CHECK_THROWS_AS(fixtures::generate(spec), ValidationError);
  spec.radius = 2.8;
  spec.height = -1.0;
  CHECK_THROWS_AS(fixtures::generate(spec), ValidationError);

  CHECK_THROWS_AS(fixtures::spec_by_name("sphere"), ValidationError);
  CHECK_THROWS_AS(fixtures::config_by_name("sphere", 1), ValidationError);
  CHECK_THROWS_AS(fixtures::config_by_name("cylinder", 0), ValidationError);
}

TEST_CASE("per-fixture configs are self-consistent") {
  for (const char* name : {"cylinder", "pillars", "boxes", "turbine"}) {
    auto cfg = fixtures::config_by_name(name, 2);
    CHECK(cfg.n_agents == 2);
    CHECK(cfg.seed == 42);
    CHECK(cfg.omega < cfg.r_max);
    CHECK(cfg.delta_lambda() > 0.0);
    // The fixture slices into at least a handful of planes.
    StructureModel m = fixtures::generate(fixtures::spec_by_name(name));
    CHECK(m.vertical_extent() > 2.0 * cfg.delta_lambda());
  }
}

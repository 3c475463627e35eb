#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccpp/verify.hpp"
#include "doctest.h"

using namespace ccpp;
namespace fs = std::filesystem;

namespace {

Trajectory straight_line(int agent_id, const Vec3& from, const Vec3& to,
                         int steps, double yaw, int branch_id, double t_s = 1.0) {
  Trajectory traj;
  traj.agent_id = agent_id;
  for (int i = 0; i <= steps; ++i) {
    TrajectorySample s;
    s.t = i * t_s;
    s.position = from + (to - from) * (double(i) / steps);
    s.yaw = yaw;
    s.branch_id = branch_id;
    traj.samples.push_back(s);
  }
  return traj;
}

StructureModel wall_x0(double y0, double y1, double z0, double z1,
                       double pitch) {
  StructureModel m;
  for (double y = y0; y <= y1 + 1e-12; y += pitch)
    for (double z = z0; z <= z1 + 1e-12; z += pitch)
      m.points.emplace_back(0.0, y, z);
  m.recompute_bounds();
  return m;
}

}  // namespace

TEST_CASE("check_safety finds planar conflicts and reports the minimum") {
  auto a = straight_line(0, Vec3(0, 0, 1), Vec3(10, 0, 1), 10, 0.0, 0);
  auto b = straight_line(1, Vec3(0, 3, 5), Vec3(10, 3, 5), 10, 0.0, 0);
  SafetyResult r = check_safety({a, b}, 1.0);
  // z difference is ignored: planar distance is the constant 3.
  CHECK(r.min_distance == doctest::Approx(3.0));
  CHECK(r.violations.empty());

  // Converging paths cross in the middle.
  auto c = straight_line(2, Vec3(0, 6, 1), Vec3(10, -6, 1), 10, 0.0, 0);
  SafetyResult rc = check_safety({a, c}, 1.0);
  CHECK(!rc.violations.empty());
  CHECK(rc.min_distance < 1.0);
  for (const Violation& v : rc.violations) {
    CHECK(v.kind == "safety");
    CHECK(v.agent_a == 0);
    CHECK(v.agent_b == 2);
  }
}

TEST_CASE("check_safety skips pairs on different branches") {
  auto a = straight_line(0, Vec3(0, 0, 1), Vec3(10, 0, 1), 10, 0.0, 0);
  auto b = straight_line(1, Vec3(0, 0.2, 1), Vec3(10, 0.2, 1), 10, 0.0, 1);
  SafetyResult r = check_safety({a, b}, 1.0);
  CHECK(r.violations.empty());
  CHECK(std::isinf(r.min_distance));

  // Samples without branch information are checked against everything.
  for (auto& s : b.samples) s.branch_id = -1;
  SafetyResult r2 = check_safety({a, b}, 1.0);
  CHECK(r2.violations.size() == a.samples.size());
}

TEST_CASE("check_coverage applies range and aperture limits") {
  // Single wall point, single hovering sample looking along +x.
  StructureModel m;
  m.points = {Vec3(2, 0, 1)};
  m.recompute_bounds();

  Trajectory hover;
  hover.agent_id = 0;
  TrajectorySample s;
  s.position = Vec3(0, 0, 1);
  s.yaw = 0.0;
  hover.samples = {s};

  const double alpha = M_PI / 6;  // 30 deg half-angle cone
  CHECK(check_coverage(m, {hover}, alpha, 4.0, 0.05).covered_fraction == 1.0);
  // Out of range.
  CHECK(check_coverage(m, {hover}, alpha, 1.5, 0.05).covered_fraction == 0.0);
  // Outside the cone: target 45 deg off the camera axis.
  hover.samples[0].yaw = M_PI / 4;
  auto rep = check_coverage(m, {hover}, alpha, 4.0, 0.05);
  CHECK(rep.covered_fraction == 0.0);
  REQUIRE(rep.uncovered_points.size() == 1);
  CHECK(rep.uncovered_points[0] == Vec3(2, 0, 1));
  // A wider cone admits it again.
  CHECK(check_coverage(m, {hover}, M_PI / 3, 4.0, 0.05).covered_fraction == 1.0);
}

TEST_CASE("check_coverage respects occlusion") {
  // Target wall at x = 2 hidden behind a closer wall at x = 0 segment.
  StructureModel m = wall_x0(-1.0, 1.0, 0.0, 2.0, 0.1);
  const size_t n_front = m.points.size();
  for (double y = -1.0; y <= 1.0 + 1e-12; y += 0.1)
    for (double z = 0.0; z <= 2.0 + 1e-12; z += 0.1)
      m.points.emplace_back(2.0, y, z);
  m.recompute_bounds();

  Trajectory hover;
  hover.agent_id = 0;
  TrajectorySample s;
  s.position = Vec3(-2, 0, 1);
  s.yaw = 0.0;  // looking at both walls along +x
  hover.samples = {s};

  auto rep = check_coverage(m, {hover}, M_PI / 3, 10.0, 0.1);
  // The front wall is visible, the back wall is occluded by it.
  const size_t total = m.points.size();
  CHECK(rep.covered_fraction ==
        doctest::Approx(double(n_front) / total).epsilon(1e-9));
  for (const Vec3& p : rep.uncovered_points) CHECK(p.x() == 2.0);

  // From the other side the back wall is visible instead.
  hover.samples[0].position = Vec3(4, 0, 1);
  hover.samples[0].yaw = M_PI;
  auto rep2 = check_coverage(m, {hover}, M_PI / 3, 10.0, 0.1);
  for (const Vec3& p : rep2.uncovered_points) CHECK(p.x() == 0.0);
}

TEST_CASE("oblique views of a dense wall are not self-occluded") {
  StructureModel m = wall_x0(-2.0, 2.0, 0.0, 2.0, 0.05);
  // Look at the wall from a shallow angle: the line of sight grazes many
  // neighbours of the target, which must not count as occluders.
  Trajectory hover;
  hover.agent_id = 0;
  TrajectorySample s;
  s.position = Vec3(-1.5, -3.0, 1.0);
  s.yaw = std::atan2(3.0, 1.5);
  hover.samples = {s};
  auto rep = check_coverage(m, {hover}, M_PI / 3, 10.0, 0.05);
  CHECK(rep.covered_fraction > 0.5);
}

TEST_CASE("check_clearance reports the minimum and flags violations") {
  StructureModel m = wall_x0(-1.0, 1.0, 0.0, 2.0, 0.1);
  auto traj = straight_line(0, Vec3(1.0, 0, 1), Vec3(0.2, 0, 1), 8, 0.0, 0);
  std::vector<Violation> violations;
  const double min_d = check_clearance(m, {traj}, 0.5, &violations);
  CHECK(min_d == doctest::Approx(0.2));
  // Samples at x = 0.4, 0.3, 0.2 are below the 0.5 threshold.
  CHECK(violations.size() == 3);
  for (const Violation& v : violations) {
    CHECK(v.kind == "clearance");
    CHECK(v.agent_a == 0);
    CHECK(v.agent_b == -1);
  }
}

TEST_CASE("verify_mission aggregates safety, clearance and coverage") {
  StructureModel m = wall_x0(-1.0, 1.0, 0.0, 2.0, 0.1);
  PlannerConfig cfg;
  cfg.alpha = M_PI / 3;
  cfg.r_max = 5.0;
  cfg.omega = 1.0;
  cfg.d_min = 0.3;
  cfg.d_s = 0.5;
  cfg.n_agents = 2;
  cfg.v_d = 0.5;
  cfg.t_s = 1.0;
  cfg.sample_pitch = 0.1;

  // Two agents sweeping the wall from x = -1.5 at safe height, same branch.
  auto a = straight_line(0, Vec3(-1.5, -1, 0.5), Vec3(-1.5, 1, 0.5), 20, 0.0, 0);
  auto b = straight_line(1, Vec3(-1.5, -1, 1.5), Vec3(-1.5, 1, 1.5), 20, 0.0, 0);
  // Planar distance is zero, so safety violations are expected at every step.
  CoverageReport rep = verify_mission(m, {a, b}, cfg);
  CHECK(rep.covered_fraction > 0.9);
  CHECK(rep.min_structure_clearance == doctest::Approx(1.5));
  CHECK(rep.min_inter_agent_distance == doctest::Approx(0.0));
  CHECK(rep.violations.size() == a.samples.size());
  REQUIRE(rep.per_agent_duration.size() == 2);
  CHECK(rep.per_agent_duration[0] == doctest::Approx(20.0));
}

TEST_CASE("report and plot files") {
  fs::path dir = fs::temp_directory_path() / "ccpp_test_verify";
  fs::create_directories(dir);

  CoverageReport rep;
  rep.covered_fraction = 0.75;
  rep.min_inter_agent_distance = 2.5;
  rep.min_structure_clearance = 1.25;
  rep.per_agent_duration = {10.0, 12.5};
  rep.violations.push_back({3.0, 0, 1, "safety"});
  rep.uncovered_points = {Vec3(1, 2, 3)};

  auto traj = straight_line(0, Vec3(0, 0, 0), Vec3(1, 0, 0), 2, 0.5, 0);
  export_plot_data(rep, {traj}, dir.string());
  write_report(rep, (dir / "report.txt").string());

  std::ifstream in(dir / "report.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  CHECK(text.find("covered_fraction = 0.75") != std::string::npos);
  CHECK(text.find("min_inter_agent_distance = 2.5") != std::string::npos);
  CHECK(text.find("min_structure_clearance = 1.25") != std::string::npos);
  CHECK(text.find("duration_s[0] = 10") != std::string::npos);
  CHECK(text.find("duration_s[1] = 12.5") != std::string::npos);
  CHECK(text.find("violations = 1") != std::string::npos);
  CHECK(text.find("violation safety t=3 agents=0,1") != std::string::npos);

  CHECK(fs::exists(dir / "path_agent_0.txt"));
  CHECK(fs::exists(dir / "yaw_agent_0.txt"));
  CHECK(fs::exists(dir / "uncovered.txt"));
  std::ifstream unc(dir / "uncovered.txt");
  std::string header, row;
  std::getline(unc, header);
  std::getline(unc, row);
  CHECK(row == "1 2 3");
}

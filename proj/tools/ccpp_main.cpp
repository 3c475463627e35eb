#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "ccpp/errors.hpp"
#include "ccpp/fixtures.hpp"
#include "ccpp/model_io.hpp"
#include "ccpp/planner.hpp"
#include "ccpp/slicer.hpp"
#include "ccpp/topology.hpp"
#include "ccpp/verify.hpp"

namespace {

// Exit codes: 0 success, 2 validation, 3 infeasible, 4 violations, 5 I/O.
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitViolations = 4;
constexpr int kExitIo = 5;

bool verbose() {
  const char* env = std::getenv("CCPP_LOG");
  return env && *env && std::string(env) != "0";
}

void log_stage(const std::string& msg) {
  if (verbose()) std::fprintf(stderr, "[ccpp] %s\n", msg.c_str());
}

int run_plan(const std::string& model_path, const std::string& config_path,
             const std::string& out_dir, int agents_override,
             long long seed_override, bool dump_debug) {
  ccpp::PlannerConfig cfg = ccpp::load_config(config_path);
  if (agents_override > 0) cfg.n_agents = agents_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  cfg.validate();

  log_stage("loading " + model_path);
  ccpp::StructureModel model = ccpp::load_model(model_path, cfg.sample_pitch);
  log_stage("planning with " + std::to_string(cfg.n_agents) + " agent(s)");
  ccpp::MissionPlan plan = ccpp::plan_mission(model, cfg);
  ccpp::write_outputs(plan, cfg, model, out_dir, dump_debug);
  std::printf("planned %zu agent trajectories, mission duration %.1f s\n",
              plan.trajectories.size(), plan.duration.max);
  return 0;
}

int run_verify(const std::string& model_path, const std::string& traj_dir,
               const std::string& config_path) {
  ccpp::PlannerConfig cfg = ccpp::load_config(config_path);
  ccpp::StructureModel model = ccpp::load_model(model_path, cfg.sample_pitch);
  std::vector<ccpp::Trajectory> trajectories =
      ccpp::read_trajectories(traj_dir);
  ccpp::CoverageReport report = ccpp::verify_mission(model, trajectories, cfg);
  ccpp::write_report(report, traj_dir + "/report.txt");
  ccpp::export_plot_data(report, trajectories, traj_dir);
  std::printf("covered_fraction %.4f, min separation %.3f, %zu violation(s)\n",
              report.covered_fraction, report.min_inter_agent_distance,
              report.violations.size());
  return report.violations.empty() ? 0 : kExitViolations;
}

int run_inspect(const std::string& model_path, const std::string& config_path) {
  ccpp::PlannerConfig cfg = ccpp::load_config(config_path);
  ccpp::StructureModel model = ccpp::load_model(model_path, cfg.sample_pitch);
  std::printf("points: %zu\n", model.points.size());
  std::printf("bounds: [%.3f %.3f %.3f] .. [%.3f %.3f %.3f]\n",
              model.min_bound.x(), model.min_bound.y(), model.min_bound.z(),
              model.max_bound.x(), model.max_bound.y(), model.max_bound.z());
  const auto slices = ccpp::slice_model(model, cfg.delta_lambda());
  for (const ccpp::Slice& slice : slices) {
    int k = 0;
    if (!slice.empty()) {
      const ccpp::Slice merged = ccpp::merge_near_points(slice, cfg.d_min);
      k = ccpp::count_loops(merged, cfg.d_min);
    }
    std::printf("slice %d  z=%.3f  points=%zu  loops=%d\n", slice.index,
                slice.lambda, slice.points.size(), k);
  }
  return 0;
}

int run_fixture(const std::string& name, const std::string& out_path,
                double pitch) {
  const ccpp::StructureModel model =
      ccpp::fixtures::generate(ccpp::fixtures::spec_by_name(name, pitch));
  ccpp::save_point_set(model, out_path);
  std::printf("wrote %zu points to %s\n", model.points.size(),
              out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative coverage path planner for structure inspection"};
  app.require_subcommand(1);

  std::string model_path, config_path, out_dir = "out", fixture_name;
  int agents_override = 0;
  long long seed_override = -1;
  double fixture_pitch = 0.0;
  bool dump_debug = false;

  CLI::App* plan = app.add_subcommand("plan", "Plan a mission");
  plan->add_option("--model", model_path, "Model file (.stl/.obj/point set)")
      ->required();
  plan->add_option("--config", config_path, "Planner config file")->required();
  plan->add_option("--out", out_dir, "Output directory");
  plan->add_option("--agents", agents_override, "Override n_agents");
  plan->add_option("--seed", seed_override, "Override seed");
  plan->add_flag("--dump-debug", dump_debug, "Write per-stage dumps");

  CLI::App* verify = app.add_subcommand("verify", "Verify planned outputs");
  verify->add_option("--model", model_path, "Model file")->required();
  verify->add_option("--out", out_dir, "Directory with trajectory files")
      ->required();
  verify->add_option("--config", config_path, "Planner config file")
      ->required();

  CLI::App* inspect =
      app.add_subcommand("inspect-model", "Report slice/loop structure");
  inspect->add_option("--model", model_path, "Model file")->required();
  inspect->add_option("--config", config_path, "Planner config file")
      ->required();

  CLI::App* fixture =
      app.add_subcommand("fixture", "Generate a built-in test structure");
  fixture
      ->add_option("--name", fixture_name,
                   "cylinder | pillars | boxes | turbine")
      ->required();
  fixture->add_option("--out", out_dir, "Output point-set file")->required();
  fixture->add_option("--pitch", fixture_pitch, "Surface sample pitch (m)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed())
      return run_plan(model_path, config_path, out_dir, agents_override,
                      seed_override, dump_debug);
    if (verify->parsed()) return run_verify(model_path, out_dir, config_path);
    if (inspect->parsed()) return run_inspect(model_path, config_path);
    if (fixture->parsed())
      return run_fixture(fixture_name, out_dir, fixture_pitch);
  } catch (const ccpp::ValidationError& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.stage().c_str(), e.what());
    return kExitValidation;
  } catch (const ccpp::InfeasibleError& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.stage().c_str(), e.what());
    return kExitInfeasible;
  } catch (const ccpp::IoError& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.stage().c_str(), e.what());
    return kExitIo;
  } catch (const ccpp::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.stage().c_str(), e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return 0;
}

#include "ccpp/planner.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ccpp/errors.hpp"
#include "ccpp/offset_path.hpp"
#include "ccpp/slicer.hpp"
#include "ccpp/topology.hpp"

namespace ccpp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

}  // namespace

MissionPlan plan_mission(const StructureModel& model,
                         const PlannerConfig& cfg) {
  cfg.validate();
  MissionPlan plan;

  auto t0 = Clock::now();
  plan.slices = slice_model(model, cfg.delta_lambda());
  plan.timings.push_back({"slice", ms_since(t0)});

  t0 = Clock::now();
  PointGrid model_grid(model.points, std::max(cfg.d_s, 1e-3));
  for (const Slice& slice : plan.slices) {
    PlannedSlice ps;
    ps.slice_index = slice.index;
    ps.lambda = slice.lambda;
    if (!slice.empty()) {
      const Slice merged = merge_near_points(slice, cfg.d_min);
      const int k = count_loops(merged, cfg.d_min);
      const SliceLoopSet set = cluster_loops(merged, k, cfg.d_min, cfg.seed);
      for (const Loop& loop : set.loops) {
        if (loop.points.size() < 3) continue;  // too sparse to circle
        OffsetLoop ol = build_offset_loop(loop, cfg.omega, cfg.step(),
                                          slice.index,
                                          static_cast<int>(ps.loops.size()));
        // A waypoint offset from a non-convex loop can end up near another
        // part of the structure. Push such waypoints further out along
        // their radial until the whole model is at least d_s away (with a
        // margin so chords between waypoints stay clear too); drop the
        // waypoint if pushing cannot fix it.
        const double floor = cfg.d_s + 0.1 * cfg.omega;
        for (Waypoint& w : ol.waypoints) {
          Vec2 dir(w.position.x() - ol.center.x(),
                   w.position.y() - ol.center.y());
          if (dir.norm() < 1e-9) continue;
          dir.normalize();
          for (int iter = 0;
               iter < 100 && model_grid.nearest_distance(w.position) < floor;
               ++iter) {
            w.position += 0.1 * cfg.omega * Vec3(dir.x(), dir.y(), 0.0);
            w.flagged = true;
          }
        }
        std::erase_if(ol.waypoints, [&](const Waypoint& w) {
          return model_grid.nearest_distance(w.position) < floor;
        });
        if (ol.waypoints.size() < 3) continue;
        ps.loops.push_back(std::move(ol));
      }
    }
    plan.planned.push_back(std::move(ps));
  }
  plan.timings.push_back({"loops", ms_since(t0)});

  t0 = Clock::now();
  assign_branch_ids(plan.planned, 2.0 * cfg.delta_lambda());
  plan.agents = assign_agents(plan.planned, cfg.n_agents);
  schedule_deconflicted(plan.agents, plan.planned, cfg.d_s);
  insert_transfers(plan.agents, plan.planned, model, cfg.d_s, cfg.step(),
                   cfg.omega);
  plan.timings.push_back({"assign", ms_since(t0)});

  t0 = Clock::now();
  for (const AgentPlan& agent : plan.agents)
    plan.trajectories.push_back(generate_trajectory(agent, cfg.v_d, cfg.t_s));
  plan.duration = mission_duration(plan.trajectories, cfg.t_s);
  plan.timings.push_back({"trajectory", ms_since(t0)});
  return plan;
}

std::string fnv1a_hex(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

std::string model_digest(const StructureModel& model) {
  std::vector<double> flat;
  flat.reserve(model.points.size() * 3);
  for (const Vec3& p : model.points) {
    flat.push_back(p.x());
    flat.push_back(p.y());
    flat.push_back(p.z());
  }
  return fnv1a_hex(flat.data(), flat.size() * sizeof(double));
}

nlohmann::json encode_spans(const Trajectory& traj) {
  nlohmann::json spans = nlohmann::json::array();
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= traj.samples.size(); ++i) {
    const bool boundary =
        i == traj.samples.size() ||
        traj.samples[i].branch_id != traj.samples[begin].branch_id ||
        traj.samples[i].coverage != traj.samples[begin].coverage;
    if (!boundary) continue;
    spans.push_back({{"begin", begin},
                     {"end", i},  // half-open
                     {"branch", traj.samples[begin].branch_id},
                     {"coverage", traj.samples[begin].coverage}});
    begin = i;
  }
  return spans;
}

}  // namespace

void write_outputs(const MissionPlan& plan, const PlannerConfig& cfg,
                   const StructureModel& model, const std::string& out_dir,
                   bool dump_debug) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("output", "cannot create " + out_dir);

  char buf[256];
  for (const Trajectory& traj : plan.trajectories) {
    const std::string path =
        out_dir + "/trajectory_" + std::to_string(traj.agent_id) + ".csv";
    std::ofstream out(path);
    if (!out) throw IoError("output", "cannot write " + path);
    out << "t,x,y,z,vx,vy,vz,yaw\n";
    for (const TrajectorySample& s : traj.samples) {
      std::snprintf(buf, sizeof(buf),
                    "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", s.t,
                    s.position.x(), s.position.y(), s.position.z(),
                    s.velocity.x(), s.velocity.y(), s.velocity.z(), s.yaw);
      out << buf;
    }
  }

  nlohmann::json mission;
  mission["n_agents"] = static_cast<int>(plan.trajectories.size());
  mission["duration_s"] = plan.duration.max;
  nlohmann::json per_agent = nlohmann::json::array();
  for (std::size_t i = 0; i < plan.trajectories.size(); ++i) {
    const Trajectory& traj = plan.trajectories[i];
    const AgentPlan& agent = plan.agents[i];
    int waypoints = 0;
    int flagged = 0;
    for (const Segment& seg : agent.segments) {
      waypoints += static_cast<int>(seg.waypoints.size());
      for (const Waypoint& w : seg.waypoints) flagged += w.flagged ? 1 : 0;
    }
    per_agent.push_back(
        {{"agent_id", traj.agent_id},
         {"duration_s",
          i < plan.duration.per_agent.size() ? plan.duration.per_agent[i] : 0.0},
         {"path_length_m", agent.total_path_length},
         {"samples", traj.samples.size()},
         {"waypoints", waypoints},
         {"flagged_waypoints", flagged},
         {"spans", encode_spans(traj)}});
  }
  mission["agents"] = std::move(per_agent);
  {
    std::ofstream out(out_dir + "/mission.json");
    if (!out) throw IoError("output", "cannot write mission.json");
    out << mission.dump(2) << "\n";
  }

  nlohmann::json manifest;
  manifest["version"] = "0.1.0";
  manifest["seed"] = cfg.seed;
  manifest["config"] = {{"alpha_deg", cfg.alpha * 180.0 / M_PI},
                        {"r_max", cfg.r_max},
                        {"omega", cfg.omega},
                        {"d_min", cfg.d_min},
                        {"d_s", cfg.d_s},
                        {"n_agents", cfg.n_agents},
                        {"v_d", cfg.v_d},
                        {"t_s", cfg.t_s},
                        {"sample_pitch", cfg.sample_pitch},
                        {"seed", cfg.seed}};
  manifest["inputs"] = {{"model_digest", model_digest(model)},
                        {"point_count", model.points.size()}};
  nlohmann::json stages = nlohmann::json::array();
  for (const StageTiming& t : plan.timings)
    stages.push_back({{"name", t.name}, {"ms", t.ms}});
  manifest["stages"] = std::move(stages);
  {
    std::ofstream out(out_dir + "/run_manifest.json");
    if (!out) throw IoError("output", "cannot write run_manifest.json");
    out << manifest.dump(2) << "\n";
  }

  if (dump_debug) {
    const std::string dbg = out_dir + "/debug";
    fs::create_directories(dbg, ec);
    if (ec) throw IoError("output", "cannot create " + dbg);
    dump_slices(plan.slices, dbg);
    for (const PlannedSlice& ps : plan.planned)
      for (const OffsetLoop& loop : ps.loops) dump_offset_loop(loop, dbg);
  }
}

std::vector<Trajectory> read_trajectories(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::pair<int, std::string>> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("trajectory_", 0) != 0 ||
        entry.path().extension() != ".csv")
      continue;
    const std::string id_str =
        name.substr(11, name.size() - 11 - 4);  // trajectory_<id>.csv
    try {
      files.emplace_back(std::stoi(id_str), entry.path().string());
    } catch (const std::exception&) {
      throw IoError("verify", "unparseable trajectory file name: " + name);
    }
  }
  if (ec) throw IoError("verify", "cannot read directory " + dir);
  if (files.empty())
    throw IoError("verify", "no trajectory_<agent>.csv files in " + dir);
  std::sort(files.begin(), files.end());

  std::vector<Trajectory> trajectories;
  for (const auto& [agent_id, path] : files) {
    std::ifstream in(path);
    if (!in) throw IoError("verify", "cannot open " + path);
    Trajectory traj;
    traj.agent_id = agent_id;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line_no == 1) continue;  // header
      if (line.empty()) continue;
      std::istringstream row(line);
      double v[8];
      std::string cell;
      for (int c = 0; c < 8; ++c) {
        if (!std::getline(row, cell, ',')) {
          throw IoError("verify", path + ":" + std::to_string(line_no) +
                                      ": expected 8 columns");
        }
        try {
          std::size_t used = 0;
          v[c] = std::stod(cell, &used);
          while (used < cell.size() && std::isspace(cell[used])) ++used;
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw IoError("verify", path + ":" + std::to_string(line_no) +
                                      ": bad number '" + cell + "'");
        }
      }
      TrajectorySample s;
      s.t = v[0];
      s.position = Vec3(v[1], v[2], v[3]);
      s.velocity = Vec3(v[4], v[5], v[6]);
      s.yaw = v[7];
      s.branch_id = -1;  // refined from mission.json below
      traj.samples.push_back(s);
    }
    trajectories.push_back(std::move(traj));
  }

  const std::string mission_path = dir + "/mission.json";
  std::ifstream mission_in(mission_path);
  if (mission_in) {
    nlohmann::json mission;
    try {
      mission_in >> mission;
    } catch (const nlohmann::json::exception& e) {
      throw IoError("verify", mission_path + ": " + e.what());
    }
    for (const auto& agent : mission.value("agents", nlohmann::json::array())) {
      const int id = agent.value("agent_id", -1);
      auto it = std::find_if(trajectories.begin(), trajectories.end(),
                             [id](const Trajectory& t) {
                               return t.agent_id == id;
                             });
      if (it == trajectories.end()) continue;
      for (const auto& span : agent.value("spans", nlohmann::json::array())) {
        const std::size_t begin = span.value("begin", std::size_t{0});
        const std::size_t end = span.value("end", std::size_t{0});
        const int branch = span.value("branch", -1);
        const bool coverage = span.value("coverage", true);
        for (std::size_t i = begin; i < end && i < it->samples.size(); ++i) {
          it->samples[i].branch_id = branch;
          it->samples[i].coverage = coverage;
        }
      }
    }
  }
  return trajectories;
}

}  // namespace ccpp

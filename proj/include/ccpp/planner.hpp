#pragma once

#include <string>
#include <vector>

#include "ccpp/mission.hpp"
#include "ccpp/verify.hpp"

namespace ccpp {

struct StageTiming {
  std::string name;
  double ms = 0.0;
};

/// Everything one planning run produces.
struct MissionPlan {
  std::vector<Slice> slices;          // raw slice bands (debug dumps)
  std::vector<PlannedSlice> planned;  // offset loops + branch ids
  std::vector<AgentPlan> agents;
  std::vector<Trajectory> trajectories;
  MissionDuration duration;
  std::vector<StageTiming> timings;
};

/// Full pipeline: slice, count and cluster loops, offset, assign agents,
/// deconflict, insert transfers, sample trajectories.
MissionPlan plan_mission(const StructureModel& model, const PlannerConfig& cfg);

/// Write trajectory_<agent>.csv ("t,x,y,z,vx,vy,vz,yaw"), mission.json and
/// run_manifest.json into out_dir; with dump_debug also the per-stage slice,
/// loop and offset dumps.
void write_outputs(const MissionPlan& plan, const PlannerConfig& cfg,
                   const StructureModel& model, const std::string& out_dir,
                   bool dump_debug = false);

/// Load trajectory_<agent>.csv files (plus branch spans from mission.json
/// when present) back from a plan output directory.
std::vector<Trajectory> read_trajectories(const std::string& dir);

/// FNV-1a 64-bit digest of a byte buffer, as fixed-width hex.
std::string fnv1a_hex(const void* data, std::size_t size);

}  // namespace ccpp

#pragma once

#include <string>
#include <vector>

#include "ccpp/offset_path.hpp"

namespace ccpp {

/// Offset loops of one slice plus the physical-branch id of each loop.
/// Branch ids are stable across vertically adjacent slices (nearest-center
/// matching) so agents can sweep a branch without transfers.
struct PlannedSlice {
  int slice_index = 0;
  double lambda = 0.0;
  std::vector<OffsetLoop> loops;
  std::vector<int> branch_ids;  // parallel to loops
};

/// Fill PlannedSlice::branch_ids. Loops of consecutive non-empty slices
/// inherit a branch id when nearest-center matching is a bijection within
/// match_radius; any split, merge or gap starts fresh branches.
void assign_branch_ids(std::vector<PlannedSlice>& slices, double match_radius);

/// One agent's ownership of a cyclic run of waypoints on one loop.
struct SectorAssignment {
  int slice_index = 0;
  int loop_index = 0;  // index into PlannedSlice::loops
  int branch_id = -1;
  int group_rank = 0;  // position among the agents sharing this loop
  int group_size = 1;
  std::vector<int> waypoint_indices;  // angular order, cyclic in the loop
  double start_angle = 0.0;
};

struct Segment {
  enum class Kind { coverage, transfer };
  Kind kind = Kind::coverage;
  int branch_id = -1;
  std::vector<Waypoint> waypoints;
};

struct AgentPlan {
  int agent_id = 0;
  std::vector<SectorAssignment> sectors;  // skeletal ownership, slice order
  std::vector<Segment> segments;          // filled by scheduling + transfers
  double total_path_length = 0.0;
};

/// Distribute agents over loops slice by slice.
///   m == 1          all agents share the loop in equal-count angular
///                   sectors whose start angles are 2*pi/n apart; sectors
///                   rotate by one position per slice so each agent resumes
///                   where it left off.
///   1 < m <= n      every loop gets at least one agent, extra agents by
///                   largest-remainder apportionment on loop circumference.
///   m > n           loops are distributed over agents balancing total
///                   circumference; an agent covers its loops sequentially.
std::vector<AgentPlan> assign_agents(const std::vector<PlannedSlice>& slices,
                                     int n_agents);

/// Order every agent's waypoints: each agent of a shared loop sweeps its
/// sector in angular order, so the maximally spread sector starts hold a
/// near-constant angular offset between agents. Throws InfeasibleError if
/// any synchronized step brings two agents within d_s. Fills
/// AgentPlan::segments with coverage segments (no transfers yet).
void schedule_deconflicted(std::vector<AgentPlan>& plans,
                           const std::vector<PlannedSlice>& slices, double d_s);

/// Straight from->to line sampled at `pitch`; samples closer than d_s to the
/// model are pushed radially outward from loop_center in 0.1 * omega steps
/// (at most 100) until clear.
std::vector<Vec3> build_transfer(const Vec3& from, const Vec3& to,
                                 const StructureModel& model, double d_s,
                                 const Vec2& loop_center, double pitch,
                                 double omega);

/// Insert transfer segments wherever consecutive coverage segments belong to
/// different branches, and compute total path lengths.
void insert_transfers(std::vector<AgentPlan>& plans,
                      const std::vector<PlannedSlice>& slices,
                      const StructureModel& model, double d_s, double pitch,
                      double omega);

struct TrajectorySample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double yaw = 0.0;
  int branch_id = -1;
  bool coverage = true;
  bool segment_end = false;  // last sample of a straight piece
};

struct Trajectory {
  int agent_id = 0;
  std::vector<TrajectorySample> samples;
};

/// Arc-length resample at h = t_s * v_d per straight piece (shorter
/// remainder at each piece end), velocity parallel to the upcoming motion
/// with norm v_d (zero at the final sample), yaw along the shortest arc.
Trajectory generate_trajectory(const AgentPlan& plan, double v_d, double t_s);

struct MissionDuration {
  std::vector<double> per_agent;  // (sample count - 1) * t_s
  double max = 0.0;
};

MissionDuration mission_duration(const std::vector<Trajectory>& trajectories,
                                 double t_s);

}  // namespace ccpp

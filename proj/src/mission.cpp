#include "ccpp/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ccpp/errors.hpp"

namespace ccpp {

void assign_branch_ids(std::vector<PlannedSlice>& slices, double match_radius) {
  int next_branch = 0;
  const PlannedSlice* prev = nullptr;
  for (PlannedSlice& slice : slices) {
    slice.branch_ids.assign(slice.loops.size(), -1);
    if (slice.loops.empty()) {
      prev = nullptr;  // a gap breaks branch continuity
      continue;
    }
    bool inherited = false;
    if (prev && prev->loops.size() == slice.loops.size()) {
      // Nearest-center matching; inherit only if it is a bijection.
      const std::size_t m = slice.loops.size();
      std::vector<int> match(m, -1);
      std::vector<bool> used(prev->loops.size(), false);
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        double best = match_radius;
        int pick = -1;
        for (std::size_t j = 0; j < prev->loops.size(); ++j) {
          double d = (slice.loops[i].center - prev->loops[j].center).norm();
          if (d < best) {
            best = d;
            pick = static_cast<int>(j);
          }
        }
        if (pick < 0 || used[pick]) {
          ok = false;
        } else {
          used[pick] = true;
          match[i] = pick;
        }
      }
      if (ok) {
        for (std::size_t i = 0; i < m; ++i)
          slice.branch_ids[i] = prev->branch_ids[match[i]];
        inherited = true;
      }
    }
    if (!inherited) {
      for (std::size_t i = 0; i < slice.loops.size(); ++i)
        slice.branch_ids[i] = next_branch++;
    }
    prev = &slice;
  }
}

namespace {

/// Agents-per-loop seat counts for 1 < m <= n: largest-remainder
/// apportionment on circumference with a floor of one seat per loop.
std::vector<int> apportion_agents(const std::vector<double>& circumference,
                                  int n_agents) {
  const int m = static_cast<int>(circumference.size());
  const double total =
      std::accumulate(circumference.begin(), circumference.end(), 0.0);
  std::vector<int> seats(m, 0);
  std::vector<double> remainder(m, 0.0);
  int assigned = 0;
  for (int i = 0; i < m; ++i) {
    double quota = total > 0 ? n_agents * circumference[i] / total
                             : double(n_agents) / m;
    seats[i] = static_cast<int>(std::floor(quota));
    remainder[i] = quota - seats[i];
    assigned += seats[i];
  }
  while (assigned < n_agents) {
    int pick = 0;
    for (int i = 1; i < m; ++i)
      if (remainder[i] > remainder[pick]) pick = i;
    ++seats[pick];
    remainder[pick] = -1.0;
    ++assigned;
  }
  while (assigned > n_agents) {
    int pick = 0;
    for (int i = 1; i < m; ++i)
      if (seats[i] > seats[pick]) pick = i;
    --seats[pick];
    --assigned;
  }
  // Every loop needs an owner.
  for (int i = 0; i < m; ++i) {
    while (seats[i] == 0) {
      int donor = 0;
      for (int j = 1; j < m; ++j)
        if (seats[j] > seats[donor]) donor = j;
      if (seats[donor] <= 1) break;
      --seats[donor];
      ++seats[i];
    }
  }
  return seats;
}

/// Loops-per-agent ownership for m > n: longest-processing-time greedy on
/// circumference. Returns loop_index -> agent.
std::vector<int> distribute_loops(const std::vector<double>& circumference,
                                  int n_agents) {
  const int m = static_cast<int>(circumference.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return circumference[a] > circumference[b];
  });
  std::vector<double> load(n_agents, 0.0);
  std::vector<int> owner(m, 0);
  for (int idx : order) {
    int pick = 0;
    for (int a = 1; a < n_agents; ++a)
      if (load[a] < load[pick]) pick = a;
    owner[idx] = pick;
    load[pick] += circumference[idx];
  }
  return owner;
}

/// Equal-count cyclic sector of a loop for the agent with rotation phase
/// `phase` out of `group` agents. Sectors shift one position per slice so
/// each agent starts a new slice where it finished the previous one.
std::vector<int> sector_indices(int n_waypoints, int phase, int group) {
  auto start_of = [&](int j) {
    return static_cast<int>(
        std::floor(static_cast<double>(j) * n_waypoints / group));
  };
  std::vector<int> out;
  const int begin = start_of(phase);
  const int end = start_of(phase + 1);
  for (int i = begin; i < end; ++i) out.push_back(i % n_waypoints);
  return out;
}

}  // namespace

std::vector<AgentPlan> assign_agents(const std::vector<PlannedSlice>& slices,
                                     int n_agents) {
  if (n_agents < 1)
    throw ValidationError("mission", "n_agents must be >= 1");

  std::vector<AgentPlan> plans(n_agents);
  for (int a = 0; a < n_agents; ++a) plans[a].agent_id = a;

  // branch id -> ordered agents covering it; recomputed when the branch
  // structure of a slice differs from the previous one.
  std::map<int, std::vector<int>> branch_agents;
  std::vector<int> prev_branches;
  // Planar position each agent was last sent to, for proximity matching
  // when the branch structure changes.
  std::vector<Vec2> agent_pos(n_agents, Vec2::Zero());
  std::vector<bool> has_pos(n_agents, false);

  // Nearest free agent to `target`; agents without history come last, in id
  // order, so the first slice falls back to 0, 1, 2, ...
  auto pick_agent = [&](const Vec2& target, std::vector<bool>& used) {
    int pick = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_agents; ++a) {
      if (used[a]) continue;
      const double d = has_pos[a] ? (agent_pos[a] - target).norm()
                                  : std::numeric_limits<double>::max();
      if (d < best) {
        best = d;
        pick = a;
      }
    }
    used[pick] = true;
    return pick;
  };

  for (const PlannedSlice& slice : slices) {
    if (slice.loops.empty()) continue;
    const int m = static_cast<int>(slice.loops.size());

    std::vector<int> branches = slice.branch_ids;
    if (branches != prev_branches) {
      branch_agents.clear();
      std::vector<double> circ(m);
      for (int i = 0; i < m; ++i) circ[i] = slice.loops[i].circumference();
      std::vector<bool> used(n_agents, false);
      if (m <= n_agents) {
        auto seats = apportion_agents(circ, n_agents);
        for (int i = 0; i < m; ++i) {
          auto& group = branch_agents[slice.branch_ids[i]];
          for (int s = 0; s < seats[i]; ++s)
            group.push_back(pick_agent(slice.loops[i].center, used));
        }
      } else {
        // Balance circumference over anonymous slots first, then map each
        // slot to the free agent nearest its loops.
        auto owner_slot = distribute_loops(circ, n_agents);
        std::vector<int> slot_agent(n_agents, -1);
        for (int slot = 0; slot < n_agents; ++slot) {
          Vec2 centroid = Vec2::Zero();
          int count = 0;
          for (int i = 0; i < m; ++i) {
            if (owner_slot[i] != slot) continue;
            centroid += slice.loops[i].center;
            ++count;
          }
          if (count == 0) continue;
          slot_agent[slot] = pick_agent(centroid / count, used);
        }
        for (int i = 0; i < m; ++i)
          branch_agents[slice.branch_ids[i]] = {slot_agent[owner_slot[i]]};
      }
      prev_branches = branches;
    }

    for (int li = 0; li < m; ++li) {
      const OffsetLoop& loop = slice.loops[li];
      const auto& group = branch_agents.at(slice.branch_ids[li]);
      const int g = static_cast<int>(group.size());
      const int n_wp = static_cast<int>(loop.waypoints.size());
      if (n_wp == 0) continue;
      for (int rank = 0; rank < g; ++rank) {
        const int phase = (rank + slice.slice_index) % g;
        auto indices = sector_indices(n_wp, phase, g);
        if (indices.empty()) continue;
        SectorAssignment sector;
        sector.slice_index = slice.slice_index;
        sector.loop_index = li;
        sector.branch_id = slice.branch_ids[li];
        sector.group_rank = rank;
        sector.group_size = g;
        sector.start_angle = loop.waypoints[indices.front()].radial_angle;
        const Vec3& last = loop.waypoints[indices.back()].position;
        agent_pos[group[rank]] = Vec2(last.x(), last.y());
        has_pos[group[rank]] = true;
        sector.waypoint_indices = std::move(indices);
        plans[group[rank]].sectors.push_back(std::move(sector));
      }
    }
  }
  return plans;
}

void schedule_deconflicted(std::vector<AgentPlan>& plans,
                           const std::vector<PlannedSlice>& slices, double d_s) {
  // Look up slices and group the sectors that share a loop.
  std::map<int, const PlannedSlice*> by_index;
  for (const PlannedSlice& s : slices) by_index[s.slice_index] = &s;

  struct Entry {
    int agent = 0;
    const SectorAssignment* sector = nullptr;
  };
  std::map<std::pair<int, int>, std::vector<Entry>> groups;
  for (AgentPlan& plan : plans) {
    plan.segments.clear();
    for (const SectorAssignment& sector : plan.sectors)
      groups[{sector.slice_index, sector.loop_index}].push_back(
          {plan.agent_id, &sector});
  }

  // Scheduled waypoint order per (slice, loop, agent).
  std::map<std::pair<std::pair<int, int>, int>, std::vector<Waypoint>> ordered;

  for (auto& [key, entries] : groups) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.sector->group_rank < b.sector->group_rank;
    });
    const OffsetLoop& loop = by_index.at(key.first)->loops[key.second];

    // Every agent sweeps its own sector in angular order; the sector starts
    // are already spread around the loop, so synchronized steps keep a
    // near-constant angular offset. Verify the separation at every step.
    std::vector<std::vector<Waypoint>> lists;
    for (const Entry& entry : entries) {
      std::vector<Waypoint> list;
      list.reserve(entry.sector->waypoint_indices.size());
      for (int idx : entry.sector->waypoint_indices)
        list.push_back(loop.waypoints[idx]);
      lists.push_back(std::move(list));
    }
    for (std::size_t a = 0; a < lists.size(); ++a) {
      for (std::size_t b = a + 1; b < lists.size(); ++b) {
        const std::size_t steps = std::min(lists[a].size(), lists[b].size());
        for (std::size_t step = 0; step < steps; ++step) {
          const double d = planar_distance(lists[a][step].position,
                                           lists[b][step].position);
          if (!(d > d_s))
            throw InfeasibleError(
                "mission",
                "agents " + std::to_string(entries[a].agent) + " and " +
                    std::to_string(entries[b].agent) +
                    " closer than d_s at step " + std::to_string(step) +
                    " on slice " + std::to_string(key.first));
        }
      }
    }
    for (std::size_t rank = 0; rank < entries.size(); ++rank)
      ordered[{key, entries[rank].agent}] = std::move(lists[rank]);
  }

  for (AgentPlan& plan : plans) {
    bool has_last = false;
    Vec3 last = Vec3::Zero();
    for (const SectorAssignment& sector : plan.sectors) {
      Segment seg;
      seg.kind = Segment::Kind::coverage;
      seg.branch_id = sector.branch_id;
      seg.waypoints = ordered.at(
          {{sector.slice_index, sector.loop_index}, plan.agent_id});
      if (seg.waypoints.empty()) continue;
      // A solo agent owns the whole loop, so its traversal can start at the
      // waypoint nearest its current position: transfers between branches
      // stay short instead of cutting across the structure. Shared loops
      // keep their synchronized sector order.
      if (sector.group_size == 1 && has_last && seg.waypoints.size() > 1) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < seg.waypoints.size(); ++i) {
          const double d = (seg.waypoints[i].position - last).norm();
          if (d < best_d) {
            best_d = d;
            best = i;
          }
        }
        std::rotate(seg.waypoints.begin(), seg.waypoints.begin() + best,
                    seg.waypoints.end());
      }
      last = seg.waypoints.back().position;
      has_last = true;
      plan.segments.push_back(std::move(seg));
    }
  }
}

std::vector<Vec3> build_transfer(const Vec3& from, const Vec3& to,
                                 const StructureModel& model, double d_s,
                                 const Vec2& loop_center, double pitch,
                                 double omega) {
  constexpr int kMaxPushIterations = 100;
  const double dist = (to - from).norm();
  if (dist < 1e-12) return {from};

  std::vector<Vec3> points;
  // Sample finer than d_s so every spot that could need repair gets its own
  // sample pushed, keeping the repaired polyline clear between samples.
  const int n = std::max(
      1, static_cast<int>(std::ceil(dist / std::min(pitch, 0.5 * d_s))));
  for (int i = 0; i <= n; ++i)
    points.push_back(from + (to - from) * (static_cast<double>(i) / n));

  PointGrid grid(model.points, std::max(d_s, 1e-3));
  // Endpoints are existing waypoints; only interior samples get repaired.
  // Push past d_s by a margin so the sampled path between repaired points
  // stays clear too.
  const double clear_floor = d_s + 0.1 * omega;
  for (int i = 1; i < n; ++i) {
    Vec3& p = points[i];
    Vec2 dir(p.x() - loop_center.x(), p.y() - loop_center.y());
    if (dir.norm() < 1e-9) {
      Vec2 along(to.x() - from.x(), to.y() - from.y());
      dir = along.norm() > 1e-9 ? Vec2(-along.y(), along.x()) : Vec2(1, 0);
    }
    dir.normalize();
    int iter = 0;
    while (grid.nearest_distance(p) < clear_floor) {
      if (++iter > kMaxPushIterations)
        throw InfeasibleError("mission",
                              "transfer sample cannot reach clearance d_s "
                              "after 100 outward pushes");
      p += 0.1 * omega * Vec3(dir.x(), dir.y(), 0.0);
    }
  }
  return points;
}

void insert_transfers(std::vector<AgentPlan>& plans,
                      const std::vector<PlannedSlice>& slices,
                      const StructureModel& model, double d_s, double pitch,
                      double omega) {
  std::map<std::pair<int, int>, Vec2> centers;
  std::map<std::pair<int, int>, const OffsetLoop*> loop_of;
  for (const PlannedSlice& s : slices)
    for (std::size_t li = 0; li < s.loops.size(); ++li) {
      centers[{s.slice_index, static_cast<int>(li)}] = s.loops[li].center;
      loop_of[{s.slice_index, static_cast<int>(li)}] = &s.loops[li];
    }

  PointGrid grid(model.points, std::max(d_s, 1e-3));
  // March finer than d_s so thin parts cannot slip between probes, and
  // demand a margin so the sampled trajectory between probes stays clear.
  const double probe_step = std::min(pitch, 0.5 * d_s);
  const double clear_floor = d_s + 0.1 * omega;
  auto blocked = [&](const Vec3& a, const Vec3& b) {
    const double dist = (b - a).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(dist / probe_step)));
    for (int i = 1; i < n; ++i) {
      if (grid.nearest_distance(a + (b - a) * (static_cast<double>(i) / n)) <
          clear_floor)
        return true;
    }
    return false;
  };

  for (AgentPlan& plan : plans) {
    std::vector<Segment> stitched;
    for (Segment& seg : plan.segments) {
      if (!stitched.empty() && !stitched.back().waypoints.empty() &&
          stitched.back().branch_id != seg.branch_id &&
          !seg.waypoints.empty()) {
        const Waypoint& from_wp = stitched.back().waypoints.back();
        const Vec3 from = from_wp.position;
        const Vec3 to = seg.waypoints.front().position;
        const Vec2 center =
            centers.at({seg.waypoints.front().slice_index,
                        seg.waypoints.front().loop_id});

        std::vector<Vec3> line;
        if (!blocked(from, to)) {
          line = build_transfer(from, to, model, d_s, center, pitch, omega);
        } else {
          // The direct chord cuts through the structure. Walk along the
          // departure loop (clear by construction) to the waypoint nearest
          // the target that has a free straight shot, then head over.
          auto it = loop_of.find({from_wp.slice_index, from_wp.loop_id});
          if (it != loop_of.end()) {
            const auto& wps = it->second->waypoints;
            const int n_wp = static_cast<int>(wps.size());
            int start = 0;
            double start_d = std::numeric_limits<double>::infinity();
            int exit = -1;
            double exit_d = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n_wp; ++i) {
              const double df = (wps[i].position - from).norm();
              if (df < start_d) {
                start_d = df;
                start = i;
              }
              if (blocked(wps[i].position, to)) continue;
              const double dt = (wps[i].position - to).norm();
              if (dt < exit_d) {
                exit_d = dt;
                exit = i;
              }
            }
            if (exit >= 0) {
              line.push_back(from);
              const int fwd = (exit - start + n_wp) % n_wp;
              const int bwd = (start - exit + n_wp) % n_wp;
              for (int s = 1; s <= std::min(fwd, bwd); ++s) {
                const int idx = fwd <= bwd ? (start + s) % n_wp
                                           : (start - s + n_wp) % n_wp;
                line.push_back(wps[idx].position);
              }
              auto tail = build_transfer(line.back(), to, model, d_s, center,
                                         pitch, omega);
              line.insert(line.end(), tail.begin() + 1, tail.end());
            }
          }
          if (line.empty())
            line = build_transfer(from, to, model, d_s, center, pitch, omega);
        }
        Segment transfer;
        transfer.kind = Segment::Kind::transfer;
        transfer.branch_id = stitched.back().branch_id;
        for (std::size_t i = 1; i + 1 < line.size(); ++i) {
          Waypoint w;
          w.position = line[i];
          w.yaw = std::numeric_limits<double>::quiet_NaN();
          w.slice_index = seg.waypoints.front().slice_index;
          w.loop_id = -1;
          transfer.waypoints.push_back(w);
        }
        if (!transfer.waypoints.empty())
          stitched.push_back(std::move(transfer));
      }
      stitched.push_back(std::move(seg));
    }
    plan.segments = std::move(stitched);

    plan.total_path_length = 0.0;
    const Vec3* last = nullptr;
    for (const Segment& seg : plan.segments) {
      for (const Waypoint& w : seg.waypoints) {
        if (last) plan.total_path_length += (w.position - *last).norm();
        last = &w.position;
      }
    }
  }
}

namespace {

struct Knot {
  Vec3 position;
  double yaw;  // NaN on transfer points, interpolated later
  int branch_id;
  bool coverage;
};

}  // namespace

Trajectory generate_trajectory(const AgentPlan& plan, double v_d, double t_s) {
  if (!(v_d > 0.0) || !(t_s > 0.0))
    throw ValidationError("mission", "v_d and t_s must be > 0");

  std::vector<Knot> knots;
  for (const Segment& seg : plan.segments) {
    for (const Waypoint& w : seg.waypoints) {
      if (!knots.empty() &&
          (knots.back().position - w.position).norm() < 1e-12)
        continue;  // zero-length pieces are skipped
      knots.push_back({w.position, w.yaw, seg.branch_id,
                       seg.kind == Segment::Kind::coverage});
    }
  }
  if (knots.size() < 2)
    throw ValidationError("mission",
                          "plan needs at least 2 distinct waypoints");

  // Interpolate yaw across transfer knots by arc length, shortest arc.
  std::vector<double> arc(knots.size(), 0.0);
  for (std::size_t i = 1; i < knots.size(); ++i)
    arc[i] = arc[i - 1] + (knots[i].position - knots[i - 1].position).norm();
  std::size_t first_defined = knots.size();
  for (std::size_t i = 0; i < knots.size(); ++i)
    if (!std::isnan(knots[i].yaw)) {
      first_defined = i;
      break;
    }
  if (first_defined == knots.size()) {
    for (Knot& k : knots) k.yaw = 0.0;
  } else {
    for (std::size_t i = 0; i < first_defined; ++i)
      knots[i].yaw = knots[first_defined].yaw;
    std::size_t prev = first_defined;
    for (std::size_t i = first_defined + 1; i < knots.size(); ++i) {
      if (std::isnan(knots[i].yaw)) continue;
      const double span = arc[i] - arc[prev];
      const double delta = shortest_arc(knots[prev].yaw, knots[i].yaw);
      for (std::size_t j = prev + 1; j < i; ++j) {
        const double u = span > 0 ? (arc[j] - arc[prev]) / span : 0.0;
        knots[j].yaw = wrap_angle(knots[prev].yaw + u * delta);
      }
      prev = i;
    }
    for (std::size_t i = prev + 1; i < knots.size(); ++i)
      knots[i].yaw = knots[prev].yaw;
  }

  const double h = v_d * t_s;
  Trajectory traj;
  traj.agent_id = plan.agent_id;
  auto emit = [&](const Vec3& p, double yaw, int branch, bool coverage,
                  bool segment_end) {
    TrajectorySample s;
    s.t = static_cast<double>(traj.samples.size()) * t_s;
    s.position = p;
    s.yaw = wrap_angle(yaw);
    s.branch_id = branch;
    s.coverage = coverage;
    s.segment_end = segment_end;
    traj.samples.push_back(s);
  };
  emit(knots[0].position, knots[0].yaw, knots[0].branch_id, knots[0].coverage,
       false);
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const Knot& a = knots[i - 1];
    const Knot& b = knots[i];
    const Vec3 delta = b.position - a.position;
    const double len = delta.norm();
    const double yaw_delta = shortest_arc(a.yaw, b.yaw);
    int k = 1;
    for (; k * h < len - 1e-9; ++k) {
      const double u = k * h / len;
      emit(a.position + u * delta, a.yaw + u * yaw_delta, b.branch_id,
           b.coverage, false);
    }
    emit(b.position, b.yaw, b.branch_id, b.coverage, true);
  }

  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const Vec3 dir =
        traj.samples[i + 1].position - traj.samples[i].position;
    const double len = dir.norm();
    traj.samples[i].velocity = len > 1e-12 ? Vec3(v_d * dir / len) : Vec3::Zero();
  }
  traj.samples.back().velocity = Vec3::Zero();
  return traj;
}

MissionDuration mission_duration(const std::vector<Trajectory>& trajectories,
                                 double t_s) {
  if (trajectories.empty())
    throw ValidationError("mission", "no trajectories");
  MissionDuration d;
  for (const Trajectory& t : trajectories) {
    const double dur =
        t.samples.empty() ? 0.0 : (t.samples.size() - 1) * t_s;
    d.per_agent.push_back(dur);
    d.max = std::max(d.max, dur);
  }
  return d;
}

}  // namespace ccpp

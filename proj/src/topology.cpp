#include "ccpp/topology.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "ccpp/errors.hpp"

namespace ccpp {

namespace {

constexpr double kZeroEigenvalueTol = 1e-8;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Deterministic uniform double in [0, 1) independent of libstdc++
// distribution internals.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<int> connected_component_labels(const std::vector<Vec3>& points,
                                            double d_min) {
  const int n = static_cast<int>(points.size());
  UnionFind uf(n);
  // Adjacency is planar, so query the grid on z-flattened copies: the 3D
  // ball then over-approximates the planar one and the hits are filtered.
  std::vector<Vec3> flat(points);
  for (Vec3& p : flat) p.z() = 0.0;
  PointGrid grid(flat, d_min);
  for (int i = 0; i < n; ++i) {
    for (int j : grid.query_ball(flat[i], d_min)) {
      if (j <= i) continue;
      if (planar_distance(points[i], points[j]) < d_min) uf.unite(i, j);
    }
  }
  std::vector<int> labels(n, -1);
  std::vector<int> remap(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int root = uf.find(i);
    if (remap[root] < 0) remap[root] = next++;
    labels[i] = remap[root];
  }
  return labels;
}

int count_loops(const Slice& slice, double d_min) {
  if (slice.points.empty())
    throw ValidationError("topology", "count_loops on empty slice " +
                                          std::to_string(slice.index));
  if (!(d_min > 0.0)) throw ValidationError("topology", "d_min must be > 0");

  const auto& pts = slice.points;
  const int n = static_cast<int>(pts.size());

  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    int degree = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (planar_distance(pts[i], pts[j]) < d_min) {
        laplacian(i, j) = -1.0;
        ++degree;
      }
    }
    laplacian(i, i) = degree;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian,
                                                        Eigen::EigenvaluesOnly);
  int spectral = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(solver.eigenvalues()[i]) < kZeroEigenvalueTol) ++spectral;
  }

  auto labels = connected_component_labels(pts, d_min);
  const int components = 1 + *std::max_element(labels.begin(), labels.end());

  if (spectral != components)
    throw InternalError(
        "topology", "spectral loop count " + std::to_string(spectral) +
                        " != union-find count " + std::to_string(components) +
                        " on slice " + std::to_string(slice.index));
  return components;
}

Slice merge_near_points(const Slice& slice, double d_min) {
  const double merge_pitch = d_min / 4.0;
  // Snap to a planar grid of cell size merge_pitch and keep one centroid per
  // occupied cell. A single pass bounds the point count without the
  // transitive collapse an iterated pairwise merge would cause on densely
  // sampled surfaces.
  std::map<std::pair<std::int64_t, std::int64_t>, int> cell_of;
  std::vector<Vec3> sums;
  std::vector<int> counts;
  for (const Vec3& p : slice.points) {
    const std::pair<std::int64_t, std::int64_t> key(
        static_cast<std::int64_t>(std::floor(p.x() / merge_pitch)),
        static_cast<std::int64_t>(std::floor(p.y() / merge_pitch)));
    auto [it, inserted] = cell_of.try_emplace(
        key, static_cast<int>(sums.size()));
    if (inserted) {
      sums.push_back(Vec3::Zero());
      counts.push_back(0);
    }
    sums[it->second] += p;
    ++counts[it->second];
  }
  Slice out;
  out.lambda = slice.lambda;
  out.index = slice.index;
  out.points.reserve(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i)
    out.points.push_back(sums[i] / counts[i]);
  return out;
}

SliceLoopSet cluster_loops(const Slice& slice, int k, double d_min,
                           std::uint64_t seed) {
  const auto& pts = slice.points;
  const int n = static_cast<int>(pts.size());
  if (n == 0)
    throw ValidationError("topology", "cluster_loops on empty slice");
  if (k < 1 || k > n)
    throw ValidationError("topology",
                          "k = " + std::to_string(k) + " out of range for " +
                              std::to_string(n) + " points");

  std::vector<Vec2> planar(n);
  for (int i = 0; i < n; ++i) planar[i] = Vec2(pts[i].x(), pts[i].y());

  // k-means++ seeding.
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL + slice.index));
  std::vector<Vec2> centers;
  centers.push_back(planar[static_cast<int>(rng() % n)]);
  std::vector<double> dist2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& c : centers)
        best = std::min(best, (planar[i] - c).squaredNorm());
      dist2[i] = best;
      total += best;
    }
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng() % n);
    } else {
      double target = uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(planar[pick]);
  }

  // Lloyd iterations until assignments are unchanged.
  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < 500; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (planar[i] - centers[0]).squaredNorm();
      for (int c = 1; c < k; ++c) {
        double d = (planar[i] - centers[c]).squaredNorm();
        if (d < best_d) {  // ties keep the lowest cluster index
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Vec2> sums(k, Vec2::Zero());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums[assign[i]] += planar[i];
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers[c] = sums[c] / counts[c];
      } else {
        // Re-seed an empty cluster with the point farthest from its center.
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          double d = (planar[i] - centers[assign[i]]).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers[c] = planar[far];
      }
    }
  }

  // Repair: a cluster must be a union of whole connected components.
  auto labels = connected_component_labels(pts, d_min);
  const int components = 1 + *std::max_element(labels.begin(), labels.end());
  std::vector<std::vector<int>> votes(components, std::vector<int>(k, 0));
  for (int i = 0; i < n; ++i) ++votes[labels[i]][assign[i]];
  std::vector<int> component_cluster(components);
  for (int comp = 0; comp < components; ++comp) {
    component_cluster[comp] = static_cast<int>(
        std::max_element(votes[comp].begin(), votes[comp].end()) -
        votes[comp].begin());
  }
  if (k == components) {
    // One cluster per component: resolve majority collisions so no loop
    // ever spans two components.
    std::vector<bool> taken(k, false);
    for (int comp = 0; comp < components; ++comp) {
      int want = component_cluster[comp];
      if (taken[want]) {
        want = 0;
        while (taken[want]) ++want;
        component_cluster[comp] = want;
      }
      taken[want] = true;
    }
  }
  for (int i = 0; i < n; ++i) assign[i] = component_cluster[labels[i]];

  // Build loops; order them by center for a deterministic loop id.
  std::vector<Loop> loops(k);
  for (int i = 0; i < n; ++i) loops[assign[i]].points.push_back(pts[i]);
  loops.erase(std::remove_if(loops.begin(), loops.end(),
                             [](const Loop& l) { return l.points.empty(); }),
              loops.end());
  for (Loop& loop : loops) {
    Vec2 sum = Vec2::Zero();
    for (const Vec3& p : loop.points) sum += Vec2(p.x(), p.y());
    loop.center = sum / static_cast<double>(loop.points.size());
    loop.radial_angles.reserve(loop.points.size());
    for (const Vec3& p : loop.points) {
      loop.radial_angles.push_back(wrap_angle(
          std::atan2(p.y() - loop.center.y(), p.x() - loop.center.x())));
    }
  }
  std::sort(loops.begin(), loops.end(), [](const Loop& a, const Loop& b) {
    if (a.center.x() != b.center.x()) return a.center.x() < b.center.x();
    return a.center.y() < b.center.y();
  });

  SliceLoopSet set;
  set.slice_index = slice.index;
  set.k = static_cast<int>(loops.size());
  set.loops = std::move(loops);
  return set;
}

void dump_loops(const SliceLoopSet& set, const std::string& dir) {
  char name[128];
  std::snprintf(name, sizeof(name), "%s/loops_%d.txt", dir.c_str(),
                set.slice_index);
  std::ofstream out(name);
  if (!out) throw IoError("topology", std::string("cannot write ") + name);
  char buf[160];
  for (int id = 0; id < set.k; ++id) {
    const Loop& loop = set.loops[id];
    std::snprintf(buf, sizeof(buf), "# loop %d center %.9g %.9g\n", id,
                  loop.center.x(), loop.center.y());
    out << buf;
    for (const Vec3& p : loop.points) {
      std::snprintf(buf, sizeof(buf), "%d %.17g %.17g %.17g\n", id, p.x(),
                    p.y(), p.z());
      out << buf;
    }
  }
}

}  // namespace ccpp

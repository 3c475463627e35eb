#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccpp/slicer.hpp"

namespace ccpp {

/// One connected component of a slice, with its planar center and the
/// radial angle of every member point about that center.
struct Loop {
  std::vector<Vec3> points;
  Vec2 center = Vec2::Zero();
  std::vector<double> radial_angles;  // atan2(y - yc, x - xc), in (-pi, pi]
};

struct SliceLoopSet {
  int slice_index = 0;
  int k = 0;
  std::vector<Loop> loops;
};

/// Connected-component label per point, adjacency = planar distance < d_min.
/// Labels are compacted to 0..k-1 in first-appearance order.
std::vector<int> connected_component_labels(const std::vector<Vec3>& points,
                                            double d_min);

/// Number of loops in a slice, computed two ways: multiplicity of the zero
/// eigenvalue of the graph Laplacian L = D - A, and union-find component
/// count. The two must agree or an InternalError is thrown.
int count_loops(const Slice& slice, double d_min);

/// Collapse points closer than d_min / 4 into their centroid. Applied before
/// graph construction to bound the Laplacian size.
Slice merge_near_points(const Slice& slice, double d_min);

/// Partition a slice into k loops with seeded k-means++ on (x, y), then
/// reassign each connected component wholesale to the cluster owning the
/// majority of its points so no loop straddles components.
SliceLoopSet cluster_loops(const Slice& slice, int k, double d_min,
                           std::uint64_t seed);

/// Debug dump: loops_<slice_index>.txt with loop id, center and members.
void dump_loops(const SliceLoopSet& set, const std::string& dir);

}  // namespace ccpp

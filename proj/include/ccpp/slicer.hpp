#pragma once

#include <string>
#include <vector>

#include "ccpp/model.hpp"

namespace ccpp {

/// Model points selected around one horizontal plane and projected onto it.
struct Slice {
  double lambda = 0.0;       // plane height z (m)
  std::vector<Vec3> points;  // on the plane, z == lambda
  int index = 0;
  bool empty() const { return points.empty(); }
};

/// Intersect the model with horizontal planes at spacing delta_lambda.
///
/// Plane heights run from min_z + delta_lambda up to the largest value
/// <= max_z - delta_lambda. A point belongs to the slice whose half-open
/// band [lambda - dl/2, lambda + dl/2) contains its z, and is projected
/// onto z = lambda. Empty slices are kept so slice indices stay aligned
/// with plane heights.
std::vector<Slice> slice_model(const StructureModel& model, double delta_lambda);

/// Write each slice as slice_<index>_<lambda>.txt in the point-set format.
void dump_slices(const std::vector<Slice>& slices, const std::string& dir);

}  // namespace ccpp

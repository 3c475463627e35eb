#include "ccpp/slicer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ccpp/errors.hpp"
#include "ccpp/model_io.hpp"

namespace ccpp {

std::vector<Slice> slice_model(const StructureModel& model, double delta_lambda) {
  if (!(delta_lambda > 0.0))
    throw ValidationError("slicer", "delta_lambda must be > 0");
  if (model.points.empty())
    throw ValidationError("slicer", "model is empty");

  const double min_z = model.min_bound.z();
  const double max_z = model.max_bound.z();
  const double extent = max_z - min_z;
  const int count =
      static_cast<int>(std::floor((extent - delta_lambda) / delta_lambda + 1e-9));
  if (count < 1)
    throw ValidationError("slicer",
                          "no slices: vertical extent " + std::to_string(extent) +
                              " m does not admit a plane between min_z + dl and "
                              "max_z - dl with dl = " +
                              std::to_string(delta_lambda));

  std::vector<Slice> slices(count);
  for (int i = 0; i < count; ++i) {
    slices[i].index = i;
    slices[i].lambda = min_z + (i + 1) * delta_lambda;
  }

  // Half-open bands: every point lands in at most one slice.
  const double band_lo = slices.front().lambda - 0.5 * delta_lambda;
  for (const Vec3& p : model.points) {
    const double offset = p.z() - band_lo;
    if (offset < 0.0) continue;
    const int idx = static_cast<int>(std::floor(offset / delta_lambda));
    if (idx >= count) continue;
    slices[idx].points.emplace_back(p.x(), p.y(), slices[idx].lambda);
  }
  return slices;
}

void dump_slices(const std::vector<Slice>& slices, const std::string& dir) {
  for (const Slice& s : slices) {
    char name[128];
    std::snprintf(name, sizeof(name), "%s/slice_%d_%.6g.txt", dir.c_str(),
                  s.index, s.lambda);
    std::ofstream out(name);
    if (!out) throw IoError("slicer", std::string("cannot write ") + name);
    char buf[96];
    for (const Vec3& p : s.points) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
      out << buf;
    }
  }
}

}  // namespace ccpp

#pragma once

#include <string>

#include "ccpp/model.hpp"

namespace ccpp {

/// Read an ASCII point set, one "x y z" (or "x,y,z") per line, '#' comments.
StructureModel load_point_set(const std::string& path);

/// Read an ASCII STL or OBJ mesh and surface-sample every triangle at a grid
/// pitch <= sample_pitch. Quads in OBJ files are split into two triangles;
/// faces with more vertices are rejected.
StructureModel load_mesh(const std::string& path, double sample_pitch);

/// Dispatch on extension: .stl/.obj go through load_mesh, anything else is
/// treated as a point set.
StructureModel load_model(const std::string& path, double sample_pitch);

/// Read a "key = value" config file. All ten keys are required:
/// alpha_deg, r_max, omega, d_min, d_s, n_agents, v_d, t_s, sample_pitch, seed.
PlannerConfig load_config(const std::string& path);

/// Write in the point-set format with enough digits for a bit-exact reload.
void save_point_set(const StructureModel& model, const std::string& path);

}  // namespace ccpp

#include "ccpp/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "ccpp/errors.hpp"

namespace ccpp {

void StructureModel::recompute_bounds() {
  min_bound = Vec3::Constant(std::numeric_limits<double>::infinity());
  max_bound = Vec3::Constant(-std::numeric_limits<double>::infinity());
  for (const Vec3& p : points) {
    min_bound = min_bound.cwiseMin(p);
    max_bound = max_bound.cwiseMax(p);
  }
}

double PlannerConfig::delta_lambda() const {
  return 0.5 * omega * std::tan(alpha);
}

void PlannerConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError("config", msg); };
  if (!(alpha > 0.0 && alpha < M_PI)) fail("alpha must be in (0, pi)");
  if (!(r_max > 0.0)) fail("r_max must be > 0");
  if (!(omega > 0.0)) fail("omega must be > 0");
  if (!(omega < r_max)) fail("omega must be < r_max");
  if (!(d_min > 0.0)) fail("d_min must be > 0");
  if (!(d_s > 0.0)) fail("d_s must be > 0");
  if (n_agents < 1) fail("n_agents must be >= 1");
  if (!(v_d > 0.0)) fail("v_d must be > 0");
  if (!(t_s > 0.0)) fail("t_s must be > 0");
  if (!(sample_pitch > 0.0)) fail("sample_pitch must be > 0");
  const double dl = delta_lambda();
  if (!(std::isfinite(dl) && dl > 0.0)) fail("delta_lambda is not finite and positive");
}

namespace {

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

std::vector<std::string> split_fields(std::string line) {
  std::replace(line.begin(), line.end(), ',', ' ');
  std::vector<std::string> fields;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) fields.push_back(tok);
  return fields;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("model_io", "cannot open file: " + path);
  return in;
}

}  // namespace

StructureModel load_point_set(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  StructureModel model;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(strip_comment(line));
    if (fields.empty()) continue;
    if (fields.size() != 3)
      throw IoError("model_io", path + ":" + std::to_string(line_no) +
                                    ": expected 3 coordinates, got " +
                                    std::to_string(fields.size()));
    Vec3 p;
    for (int k = 0; k < 3; ++k) {
      if (!parse_double(fields[k], p[k]))
        throw IoError("model_io", path + ":" + std::to_string(line_no) +
                                      ": bad number '" + fields[k] + "'");
    }
    model.points.push_back(p);
  }
  if (model.points.empty())
    throw ValidationError("model_io", "empty point set: " + path);
  model.source = StructureModel::Source::point_set;
  model.recompute_bounds();
  return model;
}

void save_point_set(const StructureModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("model_io", "cannot write file: " + path);
  char buf[96];
  for (const Vec3& p : model.points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
}

namespace {

struct Triangle {
  Vec3 a, b, c;
};

void sample_triangle(const Triangle& t, double pitch, StructureModel& model) {
  const Vec3 ab = t.b - t.a;
  const Vec3 ac = t.c - t.a;
  if (ab.cross(ac).norm() < 1e-12) {
    ++model.skipped_degenerate_faces;
    return;
  }
  const double longest =
      std::max({ab.norm(), ac.norm(), (t.c - t.b).norm()});
  const int n = std::max(1, static_cast<int>(std::ceil(longest / pitch)));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n - i; ++j) {
      model.points.push_back(t.a + ab * (double(i) / n) + ac * (double(j) / n));
    }
  }
}

std::vector<Triangle> parse_ascii_stl(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<Triangle> tris;
  std::vector<Vec3> verts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream iss(line);
    std::string kw;
    iss >> kw;
    if (kw == "vertex") {
      Vec3 v;
      if (!(iss >> v.x() >> v.y() >> v.z()))
        throw IoError("model_io", path + ":" + std::to_string(line_no) +
                                      ": malformed vertex record");
      verts.push_back(v);
    } else if (kw == "endfacet") {
      if (verts.size() != 3)
        throw IoError("model_io", path + ":" + std::to_string(line_no) +
                                      ": facet with " +
                                      std::to_string(verts.size()) +
                                      " vertices, expected 3");
      tris.push_back({verts[0], verts[1], verts[2]});
      verts.clear();
    }
  }
  if (!verts.empty())
    throw IoError("model_io", path + ": unterminated facet record");
  return tris;
}

std::vector<Triangle> parse_obj(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<Vec3> verts;
  std::vector<Triangle> tris;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream iss(strip_comment(line));
    std::string kw;
    if (!(iss >> kw)) continue;
    if (kw == "v") {
      Vec3 v;
      if (!(iss >> v.x() >> v.y() >> v.z()))
        throw IoError("model_io", path + ":" + std::to_string(line_no) +
                                      ": malformed vertex record");
      verts.push_back(v);
    } else if (kw == "f") {
      std::vector<int> idx;
      std::string tok;
      while (iss >> tok) {
        // "f 1", "f 1/2", "f 1/2/3" all reference vertex 1.
        auto slash = tok.find('/');
        int i = 0;
        try {
          i = std::stoi(tok.substr(0, slash));
        } catch (...) {
          throw IoError("model_io", path + ":" + std::to_string(line_no) +
                                        ": bad face index '" + tok + "'");
        }
        if (i < 1 || i > static_cast<int>(verts.size()))
          throw IoError("model_io", path + ":" + std::to_string(line_no) +
                                        ": face index out of range");
        idx.push_back(i - 1);
      }
      if (idx.size() == 3) {
        tris.push_back({verts[idx[0]], verts[idx[1]], verts[idx[2]]});
      } else if (idx.size() == 4) {
        tris.push_back({verts[idx[0]], verts[idx[1]], verts[idx[2]]});
        tris.push_back({verts[idx[0]], verts[idx[2]], verts[idx[3]]});
      } else {
        throw IoError("model_io", path + ":" + std::to_string(line_no) +
                                      ": face with " +
                                      std::to_string(idx.size()) +
                                      " vertices is not supported");
      }
    }
  }
  return tris;
}

}  // namespace

StructureModel load_mesh(const std::string& path, double sample_pitch) {
  if (!(sample_pitch > 0.0))
    throw ValidationError("model_io", "sample_pitch must be > 0");
  auto lower = path;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  std::vector<Triangle> tris;
  if (lower.ends_with(".stl")) {
    tris = parse_ascii_stl(path);
  } else if (lower.ends_with(".obj")) {
    tris = parse_obj(path);
  } else {
    throw ValidationError("model_io", "unknown mesh extension: " + path);
  }
  StructureModel model;
  model.source = StructureModel::Source::mesh;
  for (const Triangle& t : tris) sample_triangle(t, sample_pitch, model);
  if (model.points.empty())
    throw ValidationError("model_io", "mesh produced no sample points: " + path);
  model.recompute_bounds();
  return model;
}

StructureModel load_model(const std::string& path, double sample_pitch) {
  auto lower = path;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower.ends_with(".stl") || lower.ends_with(".obj"))
    return load_mesh(path, sample_pitch);
  return load_point_set(path);
}

PlannerConfig load_config(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = strip_comment(line);
    if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config", path + ":" + std::to_string(line_no) +
                                          ": expected 'key = value'");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError("config", path + ":" + std::to_string(line_no) +
                                          ": expected 'key = value'");
    if (kv.count(key))
      throw ValidationError("config", "duplicate key '" + key + "'");
    kv[key] = value;
  }

  static const char* kKeys[] = {"alpha_deg", "r_max", "omega", "d_min",
                                "d_s",       "n_agents", "v_d", "t_s",
                                "sample_pitch", "seed"};
  for (const char* k : kKeys) {
    if (!kv.count(k))
      throw ValidationError("config", std::string("missing key '") + k + "'");
  }
  for (const auto& [k, v] : kv) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys),
                     [&](const char* s) { return k == s; }) == std::end(kKeys))
      throw ValidationError("config", "unknown key '" + k + "'");
  }

  auto number = [&](const char* k) {
    double v;
    if (!parse_double(kv[k], v))
      throw ValidationError("config", std::string("bad number for '") + k +
                                          "': " + kv[k]);
    return v;
  };

  PlannerConfig cfg;
  cfg.alpha = number("alpha_deg") * M_PI / 180.0;
  cfg.r_max = number("r_max");
  cfg.omega = number("omega");
  cfg.d_min = number("d_min");
  cfg.d_s = number("d_s");
  double n = number("n_agents");
  if (n != std::floor(n))
    throw ValidationError("config", "n_agents must be an integer");
  cfg.n_agents = static_cast<int>(n);
  cfg.v_d = number("v_d");
  cfg.t_s = number("t_s");
  cfg.sample_pitch = number("sample_pitch");
  double seed = number("seed");
  if (seed != std::floor(seed) || seed < 0)
    throw ValidationError("config", "seed must be a non-negative integer");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.validate();
  return cfg;
}

}  // namespace ccpp

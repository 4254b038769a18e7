#include "bmc/limits.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace bmc {

using nlohmann::json;

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw Error(ErrorKind::InsufficientData, "quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size() || frac == 0.0) {
    return values[std::min(lo, values.size() - 1)];
  }
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

Interval quantile_interval(const std::vector<double>& values, double q) {
  return Interval::make(empirical_quantile(values, q), empirical_quantile(values, 1.0 - q));
}

AngleHull fit_hull(const std::vector<AnglePair>& points, const FitOptions& options) {
  try {
    return build_hull(points, options.hull);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateDistribution) {
      throw;
    }
  }
  // Collinear or coincident points: dilate each point by a small decagon.
  std::vector<AnglePair> dilated;
  dilated.reserve(points.size() * 10);
  for (const AnglePair& p : points) {
    for (int k = 0; k < 10; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / 10.0;
      dilated.push_back({p.flexion + options.degenerate_hull_radius * std::cos(phi),
                         p.abduction + options.degenerate_hull_radius * std::sin(phi)});
    }
  }
  return build_hull(dilated, options.hull);
}

}  // namespace

FitResult fit_limits(std::span<const HandPose> corpus, const FitOptions& options) {
  if (!(options.quantile >= 0.0 && options.quantile < 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "quantile must lie in [0, 0.5)");
  }
  std::array<std::vector<double>, kNumBones> lengths;
  std::array<std::vector<double>, 4> curvatures;
  std::array<std::vector<double>, 4> distances;
  std::array<std::vector<AnglePair>, kNumFingerBones> angles;
  FitResult result;

  for (std::size_t s = 0; s < corpus.size(); ++s) {
    Bones<double> bones;
    PalmDescriptor palm;
    FingerAnglesT<double> finger;
    try {
      bones = bones_from_joints(corpus[s].joints());
      palm = compute_palm(bones);
      finger = compute_finger_angles(bones, palm, DegeneracyMode::Strict);
    } catch (const Error& e) {
      if (!e.is_degeneracy()) {
        throw;
      }
      if (options.mode == DegeneracyMode::Strict) {
        throw Error(ErrorKind::DegenerateSample, e.what(), static_cast<int>(s));
      }
      result.skipped.push_back(s);
      continue;
    }
    for (std::size_t b = 0; b < kNumBones; ++b) {
      lengths[b].push_back(norm(bones[b]));
    }
    for (std::size_t i = 0; i < 4; ++i) {
      curvatures[i].push_back(palm.curvatures[i]);
      distances[i].push_back(palm.angular_distances[i]);
    }
    for (std::size_t k = 0; k < kNumFingerBones; ++k) {
      angles[k].push_back({finger.angles[k].flexion, finger.angles[k].abduction});
    }
  }

  const std::size_t usable = corpus.size() - result.skipped.size();
  if (usable < 10) {
    throw Error(ErrorKind::InsufficientData,
                "need at least 10 non-degenerate poses, got " + std::to_string(usable));
  }

  LimitSet& limits = result.limits;
  const double q = options.quantile;
  for (std::size_t b = 0; b < kNumBones; ++b) {
    limits.bone_length[b] = quantile_interval(lengths[b], q);
  }
  for (std::size_t i = 0; i < 4; ++i) {
    limits.curvature[i] = quantile_interval(curvatures[i], q);
    limits.angular_distance[i] = quantile_interval(distances[i], q);
  }
  for (std::size_t k = 0; k < kNumFingerBones; ++k) {
    limits.angle_hulls[k] = fit_hull(angles[k], options);
  }
  limits.metadata = {options.source, usable, options.length_unit};
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json interval_json(const Interval& i) { return json::array({i.lower, i.upper}); }

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaError, path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) {
    schema_error(path, "expected an object");
  }
  const auto it = obj.find(key);
  if (it == obj.end()) {
    schema_error(path.empty() ? key : path + "." + key, "missing field");
  }
  return *it;
}

double read_number(const json& v, const std::string& path) {
  if (!v.is_number()) {
    schema_error(path, "expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    schema_error(path, "expected a finite number");
  }
  return x;
}

const json& read_array(const json& v, std::size_t size, const std::string& path) {
  if (!v.is_array()) {
    schema_error(path, "expected an array");
  }
  if (v.size() != size) {
    schema_error(path, "expected " + std::to_string(size) + " entries, got " +
                           std::to_string(v.size()));
  }
  return v;
}

Interval read_interval(const json& v, const std::string& path) {
  read_array(v, 2, path);
  const double lo = read_number(v[0], path + "[0]");
  const double hi = read_number(v[1], path + "[1]");
  if (lo > hi) {
    schema_error(path, "lower bound exceeds upper bound (invariant lower <= upper)");
  }
  return Interval{lo, hi};
}

template <std::size_t N>
std::array<Interval, N> read_intervals(const json& doc, const std::string& key) {
  const json& arr = read_array(require(doc, key, ""), N, key);
  std::array<Interval, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = read_interval(arr[i], key + "[" + std::to_string(i) + "]");
  }
  return out;
}

}  // namespace

json limits_to_json(const LimitSet& limits) {
  json doc;
  doc["version"] = kLimitFileVersion;
  doc["metadata"] = {{"source", limits.metadata.source},
                     {"sample_count", limits.metadata.sample_count},
                     {"length_unit", limits.metadata.length_unit}};
  json& bl = doc["bone_length"] = json::array();
  for (const Interval& i : limits.bone_length) {
    bl.push_back(interval_json(i));
  }
  json& curv = doc["curvature"] = json::array();
  for (const Interval& i : limits.curvature) {
    curv.push_back(interval_json(i));
  }
  json& ang = doc["angular_distance"] = json::array();
  for (const Interval& i : limits.angular_distance) {
    ang.push_back(interval_json(i));
  }
  json& hulls = doc["angle_hulls"] = json::array();
  for (const AngleHull& h : limits.angle_hulls) {
    json verts = json::array();
    for (const AnglePair& v : h.vertices()) {
      verts.push_back(json::array({v.flexion, v.abduction}));
    }
    hulls.push_back(std::move(verts));
  }
  return doc;
}

LimitSet limits_from_json(const json& doc) {
  if (!doc.is_object()) {
    schema_error("$", "expected a JSON object");
  }
  const json& version = require(doc, "version", "");
  if (!version.is_number_integer() || version.get<int>() != kLimitFileVersion) {
    schema_error("version", "unsupported version (expected " +
                                std::to_string(kLimitFileVersion) + ")");
  }
  LimitSet limits;
  const json& meta = require(doc, "metadata", "");
  const json& source = require(meta, "source", "metadata");
  const json& count = require(meta, "sample_count", "metadata");
  const json& unit = require(meta, "length_unit", "metadata");
  if (!source.is_string()) schema_error("metadata.source", "expected a string");
  if (!count.is_number_unsigned()) {
    schema_error("metadata.sample_count", "expected a non-negative integer");
  }
  if (!unit.is_string()) schema_error("metadata.length_unit", "expected a string");
  limits.metadata = {source.get<std::string>(), count.get<std::size_t>(),
                     unit.get<std::string>()};

  limits.bone_length = read_intervals<kNumBones>(doc, "bone_length");
  limits.curvature = read_intervals<4>(doc, "curvature");
  limits.angular_distance = read_intervals<4>(doc, "angular_distance");

  const json& hulls = read_array(require(doc, "angle_hulls", ""), kNumFingerBones, "angle_hulls");
  for (std::size_t k = 0; k < kNumFingerBones; ++k) {
    const std::string hpath = "angle_hulls[" + std::to_string(k) + "]";
    const json& verts = read_array(hulls[k], AngleHull::kSize, hpath);
    AngleHull::Vertices v;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string vpath = hpath + "[" + std::to_string(i) + "]";
      read_array(verts[i], 2, vpath);
      v[i] = {read_number(verts[i][0], vpath + "[0]"), read_number(verts[i][1], vpath + "[1]")};
    }
    try {
      limits.angle_hulls[k] = AngleHull::from_vertices(v);
    } catch (const Error& e) {
      schema_error(hpath, e.what());
    }
  }
  return limits;
}

void save_limits(const LimitSet& limits, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  }
  out << limits_to_json(limits).dump(2) << '\n';
  if (!out) {
    throw Error(ErrorKind::IoError, "failed writing " + path.string());
  }
}

LimitSet load_limits(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    schema_error("$", std::string("malformed JSON: ") + e.what());
  }
  return limits_from_json(doc);
}

}  // namespace bmc

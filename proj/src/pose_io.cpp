#include "bmc/pose_io.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace bmc {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what,
                               std::optional<int> sample) {
  throw Error(ErrorKind::SchemaError, path + ": " + what, sample);
}

const json& list_of(const json& doc, const char* key) {
  if (doc.is_array()) {
    return doc;
  }
  if (doc.is_object()) {
    const auto it = doc.find(key);
    if (it != doc.end() && it->is_array()) {
      return *it;
    }
    schema_error(key, "missing array field", std::nullopt);
  }
  schema_error("$", std::string("expected an array or an object with \"") + key + "\"",
               std::nullopt);
}

double number_at(const json& v, const std::string& path, int sample) {
  if (!v.is_number()) {
    schema_error(path, "expected a number", sample);
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    schema_error(path, "expected a finite number", sample);
  }
  return x;
}

void expect_array(const json& v, std::size_t n, const std::string& path, int sample) {
  if (!v.is_array()) {
    schema_error(path, "expected an array", sample);
  }
  if (v.size() != n) {
    schema_error(path,
                 "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()),
                 sample);
  }
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, "$: malformed JSON: " + std::string(e.what()));
  }
}

std::vector<HandPose> poses_from_json(const json& doc, const PoseReadOptions& options) {
  const json& list = list_of(doc, "poses");
  std::vector<HandPose> out;
  out.reserve(list.size());
  for (std::size_t s = 0; s < list.size(); ++s) {
    const int sample = static_cast<int>(s);
    const std::string base = "poses[" + std::to_string(s) + "]";
    expect_array(list[s], kNumJoints, base, sample);
    Joints<double> joints;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const std::string jp = base + "[" + std::to_string(j) + "]";
      expect_array(list[s][j], 3, jp, sample);
      joints[j] = {number_at(list[s][j][0], jp + "[0]", sample),
                   number_at(list[s][j][1], jp + "[1]", sample),
                   number_at(list[s][j][2], jp + "[2]", sample)};
    }
    out.push_back(options.left_hand ? HandPose::from_left_hand(joints) : HandPose(joints));
  }
  return out;
}

std::vector<HandPose> load_poses(const std::filesystem::path& path,
                                 const PoseReadOptions& options) {
  return poses_from_json(read_json_file(path), options);
}

json pose_to_json(const HandPose& pose) {
  json arr = json::array();
  for (const Vec3d& p : pose.joints()) {
    arr.push_back(json::array({p.x, p.y, p.z}));
  }
  return arr;
}

json poses_to_json(const std::vector<HandPose>& poses) {
  json arr = json::array();
  for (const HandPose& p : poses) {
    arr.push_back(pose_to_json(p));
  }
  return json{{"poses", std::move(arr)}};
}

void save_poses(const std::vector<HandPose>& poses, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  }
  out << poses_to_json(poses).dump() << '\n';
  if (!out) {
    throw Error(ErrorKind::IoError, "failed writing " + path.string());
  }
}

std::vector<TwoPointFiveD> samples_25d_from_json(const json& doc) {
  const json& list = list_of(doc, "samples");
  std::vector<TwoPointFiveD> out;
  out.reserve(list.size());
  for (std::size_t s = 0; s < list.size(); ++s) {
    const int sample = static_cast<int>(s);
    const std::string base = "samples[" + std::to_string(s) + "]";
    const json& item = list[s];
    if (!item.is_object()) {
      schema_error(base, "expected an object", sample);
    }
    if (!item.contains("uv")) schema_error(base + ".uv", "missing field", sample);
    if (!item.contains("relative_depth")) {
      schema_error(base + ".relative_depth", "missing field", sample);
    }
    TwoPointFiveD d;
    const json& uv = item["uv"];
    expect_array(uv, kNumJoints, base + ".uv", sample);
    const json& zr = item["relative_depth"];
    expect_array(zr, kNumJoints, base + ".relative_depth", sample);
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const std::string up = base + ".uv[" + std::to_string(j) + "]";
      expect_array(uv[j], 2, up, sample);
      d.uv[j] = {number_at(uv[j][0], up + "[0]", sample), number_at(uv[j][1], up + "[1]", sample)};
      d.relative_depth[j] =
          number_at(zr[j], base + ".relative_depth[" + std::to_string(j) + "]", sample);
    }
    if (d.relative_depth[kRootJoint] != 0.0) {
      schema_error(base + ".relative_depth[0]", "root relative depth must be 0", sample);
    }
    out.push_back(d);
  }
  return out;
}

std::vector<TwoPointFiveD> load_samples_25d(const std::filesystem::path& path) {
  return samples_25d_from_json(read_json_file(path));
}

json sample_25d_to_json(const TwoPointFiveD& sample) {
  json uv = json::array();
  for (const auto& p : sample.uv) {
    uv.push_back(json::array({p[0], p[1]}));
  }
  return json{{"uv", std::move(uv)}, {"relative_depth", sample.relative_depth}};
}

}  // namespace bmc

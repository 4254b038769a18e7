#include "bmc/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bmc {

double GradientReport::max_abs() const {
  double m = 0.0;
  for (const Vec3d& g : gradient) {
    m = std::max({m, std::abs(g.x), std::abs(g.y), std::abs(g.z)});
  }
  return m;
}

void LossWeights::validate() const {
  const std::pair<const char*, double> all[] = {
      {"bone_length", bone_length},       {"root_bone", root_bone},
      {"angle", angle},                   {"keypoints_2d", keypoints_2d},
      {"relative_depth", relative_depth}, {"root_depth", root_depth},
  };
  for (const auto& [name, w] : all) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("weight ") + name + " must be finite and non-negative");
    }
  }
}

double bone_length_loss(const BoneSet& bones, const std::array<Interval, kNumBones>& limits) {
  return bone_length_loss_t(bones.bones, limits);
}

double angle_constraint_loss(const std::array<AnglePair, kNumFingerBones>& angles,
                             const std::array<AngleHull, kNumFingerBones>& hulls) {
  std::array<AnglePairT<double>, kNumFingerBones> pairs;
  for (std::size_t k = 0; k < kNumFingerBones; ++k) {
    pairs[k] = {angles[k].flexion, angles[k].abduction};
  }
  return angle_constraint_loss_t(pairs, hulls);
}

double bmc_value(const HandPose& pose, const LimitSet& limits, const LossWeights& weights,
                 const LossOptions& options) {
  try {
    return bmc_terms(pose.joints(), limits, weights, options.mode).total;
  } catch (const Error& e) {
    if (options.mode == DegeneracyMode::Lenient && e.is_degeneracy()) {
      return options.degenerate_penalty;
    }
    throw;
  }
}

LossReport bmc_loss(const HandPose& pose, const LimitSet& limits, const LossWeights& weights,
                    const LossOptions& options) {
  LossReport report;
  try {
    BmcTermsT<ad::Var> terms;
    report.gradient = grad(
        [&](const Joints<ad::Var>& joints) {
          terms = bmc_terms(joints, limits, weights, options.mode);
          return terms.total;
        },
        pose);
    report.bone_length = terms.bone_length.value();
    report.root_bone = terms.root_bone.value();
    report.angle = terms.angle.value();
    report.total = terms.total.value();
    report.violations = terms.breakdown;
  } catch (const Error& e) {
    if (options.mode != DegeneracyMode::Lenient || !e.is_degeneracy()) {
      throw;
    }
    report = LossReport{};
    report.degenerate = true;
    report.degeneracy = e.what();
    report.total = options.degenerate_penalty;
    report.gradient.value = options.degenerate_penalty;
  }
  return report;
}

namespace {

double interval_margin(double x, const Interval& i) {
  return std::min(std::abs(x - i.lower), std::abs(x - i.upper));
}

double segment_distance(const AnglePair& p, const AnglePair& a, const AnglePair& b) {
  const double vf = b.flexion - a.flexion;
  const double va = b.abduction - a.abduction;
  const double wf = p.flexion - a.flexion;
  const double wa = p.abduction - a.abduction;
  const double t = std::clamp((wf * vf + wa * va) / (vf * vf + va * va), 0.0, 1.0);
  return std::hypot(wf - t * vf, wa - t * va);
}

double hull_margin(const AngleHull& hull, const AnglePair& p) {
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < AngleHull::kSize; ++k) {
    margin = std::min(margin, segment_distance(p, hull[k], hull[k + 1]));
  }
  if (contains(hull, p)) {
    return margin;
  }
  // Outside: the distance is a minimum over edges of sums of absolute
  // values of clamped projections.
  std::array<double, AngleHull::kSize> d{};
  std::array<AnglePair, AngleHull::kSize> nearest{};
  for (int k = 0; k < AngleHull::kSize; ++k) {
    const AnglePair& h0 = hull[k];
    const AnglePair& h1 = hull[k + 1];
    const double vf = h1.flexion - h0.flexion;
    const double va = h1.abduction - h0.abduction;
    const double raw = ((p.flexion - h0.flexion) * vf + (p.abduction - h0.abduction) * va) /
                       (vf * vf + va * va);
    const double t = std::clamp(raw, 0.0, 1.0);
    const double pf = raw > 1.0 ? h1.flexion : h0.flexion + t * vf;
    const double pa = raw > 1.0 ? h1.abduction : h0.abduction + t * va;
    const double args[4] = {std::cos(p.flexion) - std::cos(pf),
                            std::sin(p.flexion) - std::sin(pf),
                            std::cos(p.abduction) - std::cos(pa),
                            std::sin(p.abduction) - std::sin(pa)};
    double sum = 0.0;
    for (double a : args) {
      sum += std::abs(a);
    }
    d[static_cast<std::size_t>(k)] = sum;
    nearest[static_cast<std::size_t>(k)] = {pf, pa};
  }
  const auto best = static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
  double second = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d.size(); ++k) {
    const bool same_point = std::abs(nearest[k].flexion - nearest[best].flexion) < 1e-12 &&
                            std::abs(nearest[k].abduction - nearest[best].abduction) < 1e-12;
    if (!same_point) second = std::min(second, d[k]);
  }
  margin = std::min(margin, second - d[best]);
  {
    const AnglePair& h0 = hull[static_cast<int>(best)];
    const AnglePair& h1 = hull[static_cast<int>(best) + 1];
    const double vf = h1.flexion - h0.flexion;
    const double va = h1.abduction - h0.abduction;
    const double len = std::hypot(vf, va);
    const double raw = ((p.flexion - h0.flexion) * vf + (p.abduction - h0.abduction) * va) /
                       (len * len);
    margin = std::min({margin, std::abs(raw) * len, std::abs(raw - 1.0) * len});
    const double t = std::clamp(raw, 0.0, 1.0);
    const double pf = h0.flexion + t * vf;
    const double pa = h0.abduction + t * va;
    margin = std::min({margin, std::abs(std::cos(p.flexion) - std::cos(pf)),
                       std::abs(std::sin(p.flexion) - std::sin(pf)),
                       std::abs(std::cos(p.abduction) - std::cos(pa)),
                       std::abs(std::sin(p.abduction) - std::sin(pa))});
  }
  return margin;
}

}  // namespace

double kink_margin(const HandPose& pose, const LimitSet& limits) {
  const Bones<double> bones = bones_from_joints(pose.joints());
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < kNumBones; ++b) {
    margin = std::min(margin, interval_margin(norm(bones[b]), limits.bone_length[b]));
  }
  const PalmDescriptor palm = compute_palm(bones);
  for (std::size_t i = 0; i < 4; ++i) {
    margin = std::min(margin, interval_margin(palm.curvatures[i], limits.curvature[i]));
    margin = std::min(margin,
                      interval_margin(palm.angular_distances[i], limits.angular_distance[i]));
  }
  const FingerAnglesT<double> finger = compute_finger_angles(bones, palm, DegeneracyMode::Strict);
  const auto frames = compute_pip_frames(bones, palm);
  for (int f = 0; f < kNumFingers; ++f) {
    BoneFrame frame = frames[static_cast<std::size_t>(f)];
    for (int level = 0; level < 3; ++level) {
      const auto bone = static_cast<std::size_t>(finger_bone(f, level));
      const auto k = static_cast<std::size_t>(3 * f + level);
      const Vec3d local = to_local(frame, bones[bone]);
      // Distance of the bone tip from the frame's y axis.
      margin = std::min(margin, std::hypot(local.x, local.z));
      const AnglePair p{finger.angles[k].flexion, finger.angles[k].abduction};
      // Flexion wraps from pi to -pi behind the frame.
      margin = std::min(margin, std::numbers::pi - std::abs(p.flexion));
      margin = std::min(margin, hull_margin(limits.angle_hulls[k], p));
      frame = bone_angles(bones[bone], frame, DegeneracyMode::Strict).child_frame;
    }
  }
  return margin;
}

double training_loss(const TrainingPrediction& prediction, const TrainingLabels& labels,
                     double bmc_total, const LossWeights& weights) {
  weights.validate();
  double total = bmc_total;
  if (labels.keypoints_2d) {
    double s = 0.0;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      s += std::abs(prediction.keypoints_2d[j][0] - (*labels.keypoints_2d)[j][0]) +
           std::abs(prediction.keypoints_2d[j][1] - (*labels.keypoints_2d)[j][1]);
    }
    total += weights.keypoints_2d * s / (2.0 * kNumJoints);
  }
  if (labels.relative_depth) {
    double s = 0.0;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      s += std::abs(prediction.relative_depth[j] - (*labels.relative_depth)[j]);
    }
    total += weights.relative_depth * s / kNumJoints;
  }
  if (labels.root_depth) {
    total += weights.root_depth * std::abs(prediction.root_depth - *labels.root_depth);
  }
  return total;
}

}  // namespace bmc

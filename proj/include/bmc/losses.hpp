#pragma once

// Bone-length, root-bone and angle constraint losses and their weighted sum
// L_BMC = w_BL * L_BL + w_RB * L_RB + w_A * L_A.

#include <array>
#include <optional>
#include <string>

#include "bmc/gradient.hpp"
#include "bmc/limits.hpp"

namespace bmc {

struct LossWeights {
  double bone_length = 0.1;
  double root_bone = 0.1;
  double angle = 0.01;
  // Terms of the full training objective (value-level utility only).
  double keypoints_2d = 1.0;
  double relative_depth = 5.0;
  double root_depth = 1.0;

  // Throws InvalidArgument on a negative or non-finite weight.
  void validate() const;
};

struct LossOptions {
  // Strict: geometric degeneracies throw. Lenient: the pose gets
  // `degenerate_penalty` as its total and a zero gradient.
  DegeneracyMode mode = DegeneracyMode::Strict;
  double degenerate_penalty = 1e3;
};

// Unweighted per-item penalties behind each term.
struct ViolationBreakdown {
  std::array<double, kNumBones> bone_length{};
  std::array<double, 4> curvature{};
  std::array<double, 4> angular_distance{};
  std::array<double, kNumFingerBones> angle{};
};

template <typename T>
T bone_length_loss_t(const Bones<T>& bones, const std::array<Interval, kNumBones>& limits,
                     ViolationBreakdown* breakdown = nullptr) {
  T sum(0.0);
  for (std::size_t b = 0; b < kNumBones; ++b) {
    const T p = interval_penalty(norm(bones[b]), limits[b]);
    if (breakdown) breakdown->bone_length[b] = math::value_of(p);
    sum += p;
  }
  return sum / 20.0;
}

template <typename T>
T angle_constraint_loss_t(const std::array<AnglePairT<T>, kNumFingerBones>& angles,
                          const std::array<AngleHull, kNumFingerBones>& hulls,
                          ViolationBreakdown* breakdown = nullptr) {
  T sum(0.0);
  for (std::size_t k = 0; k < kNumFingerBones; ++k) {
    const T d = angle_loss_term_t(hulls[k], angles[k]);
    if (breakdown) breakdown->angle[k] = math::value_of(d);
    sum += d;
  }
  return sum / 15.0;
}

template <typename T>
struct BmcTermsT {
  T bone_length{};
  T root_bone{};
  T angle{};
  T total{};
  ViolationBreakdown breakdown;
};

template <typename T>
BmcTermsT<T> bmc_terms(const Joints<T>& joints, const LimitSet& limits,
                       const LossWeights& weights, DegeneracyMode mode) {
  BmcTermsT<T> out;
  const Bones<T> bones = bones_from_joints(joints);
  out.bone_length = bone_length_loss_t(bones, limits.bone_length, &out.breakdown);

  const PalmDescriptorT<T> palm = compute_palm(bones);
  T rb(0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    const T pc = interval_penalty(palm.curvatures[i], limits.curvature[i]);
    const T pa = interval_penalty(palm.angular_distances[i], limits.angular_distance[i]);
    out.breakdown.curvature[i] = math::value_of(pc);
    out.breakdown.angular_distance[i] = math::value_of(pa);
    rb += pc;
    rb += pa;
  }
  out.root_bone = rb / 4.0;

  const FingerAnglesT<T> finger = compute_finger_angles(bones, palm, mode);
  out.angle = angle_constraint_loss_t(finger.angles, limits.angle_hulls, &out.breakdown);

  out.total = T(weights.bone_length) * out.bone_length + T(weights.root_bone) * out.root_bone +
              T(weights.angle) * out.angle;
  return out;
}

struct LossReport {
  double bone_length = 0.0;
  double root_bone = 0.0;
  double angle = 0.0;
  double total = 0.0;
  GradientReport gradient;
  ViolationBreakdown violations;
  // Set in lenient mode when the pose was degenerate; `degeneracy` holds
  // the reason and the terms are zero.
  bool degenerate = false;
  std::string degeneracy;
};

double bone_length_loss(const BoneSet& bones, const std::array<Interval, kNumBones>& limits);

double angle_constraint_loss(const std::array<AnglePair, kNumFingerBones>& angles,
                             const std::array<AngleHull, kNumFingerBones>& hulls);

// Value only, no tape.
double bmc_value(const HandPose& pose, const LimitSet& limits, const LossWeights& weights,
                 const LossOptions& options = {});

// Value, per-term breakdown and gradient.
LossReport bmc_loss(const HandPose& pose, const LimitSet& limits, const LossWeights& weights,
                    const LossOptions& options = {});

// Smallest distance, over every quantity the loss branches on, between the
// quantity and its nearest non-differentiable point: interval endpoints,
// hull boundary, edge-projection clamps, ties between edges, zeros inside
// the absolute values of the hull distance, the flexion wrap at +-pi and the
// gimbal configuration.
// Lengths in pose units, angles in radians.
double kink_margin(const HandPose& pose, const LimitSet& limits);

// Full training objective for one sample: L1 terms against whatever labels
// are available plus a precomputed L_BMC.
struct TrainingPrediction {
  std::array<std::array<double, 2>, kNumJoints> keypoints_2d{};
  std::array<double, kNumJoints> relative_depth{};
  double root_depth = 0.0;
};

struct TrainingLabels {
  std::optional<std::array<std::array<double, 2>, kNumJoints>> keypoints_2d;
  std::optional<std::array<double, kNumJoints>> relative_depth;
  std::optional<double> root_depth;
};

double training_loss(const TrainingPrediction& prediction, const TrainingLabels& labels,
                     double bmc_total, const LossWeights& weights);

}  // namespace bmc

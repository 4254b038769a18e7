#pragma once

// Pinhole projection and recovery of the absolute root depth from the 2.5D
// representation (image points plus root-relative, scale-normalized depths).

#include <array>
#include <functional>
#include <span>

#include <Eigen/Core>

#include "bmc/hand_model.hpp"

namespace bmc {

class CameraIntrinsics {
 public:
  // Throws InvalidArgument unless K is finite, invertible and has positive
  // focal entries.
  explicit CameraIntrinsics(const Eigen::Matrix3d& k);
  static CameraIntrinsics from_focal(double fx, double fy, double cx, double cy);
  // Nine numbers, row-major.
  static CameraIntrinsics from_row_major(std::span<const double> values);

  const Eigen::Matrix3d& matrix() const { return k_; }
  const Eigen::Matrix3d& inverse() const { return k_inv_; }

  // K^-1 [u, v, 1].
  Eigen::Vector3d back_project(const std::array<double, 2>& uv) const;

 private:
  Eigen::Matrix3d k_;
  Eigen::Matrix3d k_inv_;
};

using ImagePoints = std::array<std::array<double, 2>, kNumJoints>;

struct TwoPointFiveD {
  ImagePoints uv{};
  std::array<double, kNumJoints> relative_depth{};  // root entry is exactly 0
};

struct ReferencePair {
  int a = kRootJoint;
  int b = mcp_joint(static_cast<int>(Finger::Middle));
};

struct Decomposition {
  TwoPointFiveD data;
  double scale = 0.0;  // length of the reference bone
};

// First two components of K (X/Z, Y/Z, 1) per joint. Throws BehindCamera
// with the joint index when Z <= kEpsilon.
ImagePoints project(const HandPose& pose, const CameraIntrinsics& camera);

// Throws DegenerateReference if the pair is invalid or the reference bone is
// shorter than kEpsilon, BehindCamera as project().
Decomposition decompose_25d(const HandPose& pose, const CameraIntrinsics& camera,
                            ReferencePair ref = {});

// Optional correction applied to the analytic root depth.
using RootDepthCorrector = std::function<double(const TwoPointFiveD&, double)>;

// Scale-normalized root depth from the unit-length constraint on the
// reference bone. Throws DegenerateReference (identical reference rays),
// ComplexRoots (negative discriminant) or NoPositiveRoot.
double solve_zroot(const TwoPointFiveD& data, const CameraIntrinsics& camera,
                   ReferencePair ref = {}, const RootDepthCorrector& corrector = {});

// Joints (z_root + z^r_i) K^-1 [u_i, v_i, 1], in scale-normalized units.
Joints<double> reconstruct(const TwoPointFiveD& data, const CameraIntrinsics& camera,
                           double zroot);

}  // namespace bmc

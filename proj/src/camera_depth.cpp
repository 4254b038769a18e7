#include "bmc/camera_depth.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

namespace bmc {

CameraIntrinsics::CameraIntrinsics(const Eigen::Matrix3d& k) : k_(k) {
  if (!k.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "camera matrix has non-finite entries");
  }
  if (!(k(0, 0) > 0.0 && k(1, 1) > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "focal lengths must be positive");
  }
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(k);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::InvalidArgument, "camera matrix is singular");
  }
  k_inv_ = lu.inverse();
}

CameraIntrinsics CameraIntrinsics::from_focal(double fx, double fy, double cx, double cy) {
  Eigen::Matrix3d k;
  k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return CameraIntrinsics(k);
}

CameraIntrinsics CameraIntrinsics::from_row_major(std::span<const double> values) {
  if (values.size() != 9) {
    throw Error(ErrorKind::InvalidArgument,
                "camera matrix needs 9 numbers, got " + std::to_string(values.size()));
  }
  Eigen::Matrix3d k;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      k(r, c) = values[static_cast<std::size_t>(3 * r + c)];
    }
  }
  return CameraIntrinsics(k);
}

Eigen::Vector3d CameraIntrinsics::back_project(const std::array<double, 2>& uv) const {
  return k_inv_ * Eigen::Vector3d(uv[0], uv[1], 1.0);
}

ImagePoints project(const HandPose& pose, const CameraIntrinsics& camera) {
  ImagePoints out;
  for (int j = 0; j < kNumJoints; ++j) {
    const Vec3d& p = pose[j];
    if (!(p.z > kEpsilon)) {
      throw Error(ErrorKind::BehindCamera, "joint depth must exceed epsilon", j);
    }
    const Eigen::Vector3d h = camera.matrix() * Eigen::Vector3d(p.x / p.z, p.y / p.z, 1.0);
    out[static_cast<std::size_t>(j)] = {h.x(), h.y()};
  }
  return out;
}

namespace {

void check_pair(ReferencePair ref) {
  const auto valid = [](int j) { return j >= 0 && j < kNumJoints; };
  if (!valid(ref.a) || !valid(ref.b) || ref.a == ref.b) {
    throw Error(ErrorKind::DegenerateReference,
                "reference joints must be two distinct joints in [0, 20]");
  }
}

}  // namespace

Decomposition decompose_25d(const HandPose& pose, const CameraIntrinsics& camera,
                            ReferencePair ref) {
  check_pair(ref);
  const double s = norm(pose[ref.b] - pose[ref.a]);
  if (!(s > kEpsilon)) {
    throw Error(ErrorKind::DegenerateReference, "reference bone shorter than epsilon");
  }
  Decomposition out;
  out.scale = s;
  out.data.uv = project(pose, camera);
  const double zroot = pose[kRootJoint].z;
  for (int j = 0; j < kNumJoints; ++j) {
    out.data.relative_depth[static_cast<std::size_t>(j)] =
        j == kRootJoint ? 0.0 : (pose[j].z - zroot) / s;
  }
  return out;
}

double solve_zroot(const TwoPointFiveD& data, const CameraIntrinsics& camera,
                   ReferencePair ref, const RootDepthCorrector& corrector) {
  check_pair(ref);
  const auto ia = static_cast<std::size_t>(ref.a);
  const auto ib = static_cast<std::size_t>(ref.b);
  const Eigen::Vector3d xa = camera.back_project(data.uv[ia]);
  const Eigen::Vector3d xb = camera.back_project(data.uv[ib]);
  const double za = data.relative_depth[ia];
  const double zb = data.relative_depth[ib];

  // |(Z + za) xa - (Z + zb) xb|^2 = 1  <=>  |Z d + m|^2 = 1
  const Eigen::Vector3d d = xa - xb;
  const Eigen::Vector3d m = za * xa - zb * xb;
  const double qa = d.squaredNorm();
  const double qb = 2.0 * d.dot(m);
  const double qc = m.squaredNorm() - 1.0;
  if (!(qa > kEpsilon * kEpsilon)) {
    throw Error(ErrorKind::DegenerateReference, "reference joints project to the same ray");
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) {
    throw Error(ErrorKind::ComplexRoots, "depth quadratic has a negative discriminant");
  }
  // Stable pairing of the two roots.
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
  double r1 = q / qa;
  double r2 = q != 0.0 ? qc / q : -r1;
  if (r1 < r2) std::swap(r1, r2);  // r1 is the larger root

  const auto all_in_front = [&](double z) {
    for (double zr : data.relative_depth) {
      if (!(z + zr > 0.0)) return false;
    }
    return true;
  };
  double z;
  if (r1 > 0.0 && r2 > 0.0) {
    z = (all_in_front(r2) && !all_in_front(r1)) ? r2 : r1;
  } else if (r1 > 0.0) {
    z = r1;
  } else {
    throw Error(ErrorKind::NoPositiveRoot, "depth quadratic has no positive root");
  }
  return corrector ? corrector(data, z) : z;
}

Joints<double> reconstruct(const TwoPointFiveD& data, const CameraIntrinsics& camera,
                           double zroot) {
  Joints<double> out;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const Eigen::Vector3d p = (zroot + data.relative_depth[j]) * camera.back_project(data.uv[j]);
    out[j] = {p.x(), p.y(), p.z()};
  }
  return out;
}

}  // namespace bmc

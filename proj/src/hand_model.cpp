#include "bmc/hand_model.hpp"

#include <string>

namespace bmc {

HandPose::HandPose(const Joints<double>& joints) : joints_(joints) {
  for (int j = 0; j < kNumJoints; ++j) {
    const Vec3d& p = joints_[static_cast<std::size_t>(j)];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw Error(ErrorKind::InvalidPose, "non-finite joint coordinate", j);
    }
  }
}

HandPose HandPose::from_left_hand(const Joints<double>& joints) {
  Joints<double> mirrored = joints;
  for (Vec3d& p : mirrored) {
    p.x = -p.x;
  }
  return HandPose(mirrored);
}

Interval Interval::make(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper)) {
    throw Error(ErrorKind::InvalidArgument, "interval bounds must be finite");
  }
  if (lower > upper) {
    throw Error(ErrorKind::InvalidArgument,
                "interval lower bound " + std::to_string(lower) +
                    " exceeds upper bound " + std::to_string(upper));
  }
  return Interval{lower, upper};
}

BoneSet bones_from_pose(const HandPose& pose) {
  return BoneSet{bones_from_joints(pose.joints())};
}

double angle_between(const Vec3d& v1, const Vec3d& v2) {
  return angle_between<double>(v1, v2);
}

double interval_penalty(double x, const Interval& spec) {
  return interval_penalty<double>(x, spec);
}

Vec3d project_onto_plane(const Vec3d& v, const Vec3d& x, const Vec3d& y) {
  const double cross_norm = norm(cross(x, y));
  if (cross_norm < kEpsilon) {
    throw Error(ErrorKind::DegenerateBasis, "plane basis vectors are parallel");
  }
  // Solve the 2x2 normal equations [xx xy; xy yy] [a; b] = [vx; vy].
  const double xx = dot(x, x);
  const double xy = dot(x, y);
  const double yy = dot(y, y);
  const double vx = dot(v, x);
  const double vy = dot(v, y);
  const double det = xx * yy - xy * xy;
  const double a = (yy * vx - xy * vy) / det;
  const double b = (xx * vy - xy * vx) / det;
  return a * x + b * y;
}

}  // namespace bmc

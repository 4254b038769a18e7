#include "oracles.hpp"

#include <cmath>
#include <limits>

namespace oracle {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double trig_metric(const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  return std::abs(std::cos(p.x()) - std::cos(q.x())) + std::abs(std::sin(p.x()) - std::sin(q.x())) +
         std::abs(std::cos(p.y()) - std::cos(q.y())) + std::abs(std::sin(p.y()) - std::sin(q.y()));
}

}  // namespace

int winding_number(const Polygon& poly, const Eigen::Vector2d& p) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly[i];
    const Eigen::Vector2d& b = poly[(i + 1) % n];
    const double side = cross2(b - a, p - a);
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && side > 0) ++wn;
    } else if (b.y() <= p.y() && side < 0) {
      --wn;
    }
  }
  return wn;
}

double boundary_distance(const Polygon& poly, const Eigen::Vector2d& p) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = poly[i];
    const Eigen::Vector2d ab = poly[(i + 1) % n] - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (a + t * ab - p).norm());
  }
  return best;
}

double sampled_trig_distance(const Polygon& poly, const Eigen::Vector2d& p, int samples) {
  const std::size_t n = poly.size();
  double perimeter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    perimeter += (poly[(i + 1) % n] - poly[i]).norm();
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = poly[i];
    const Eigen::Vector2d ab = poly[(i + 1) % n] - a;
    const int m = std::max(2, static_cast<int>(samples * ab.norm() / perimeter));
    for (int s = 0; s <= m; ++s) {
      best = std::min(best, trig_metric(p, a + (static_cast<double>(s) / m) * ab));
    }
  }
  return best;
}

double sampled_projection_distance(const Polygon& poly, const Eigen::Vector2d& p, int samples) {
  const std::size_t n = poly.size();
  double perimeter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    perimeter += (poly[(i + 1) % n] - poly[i]).norm();
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = poly[i];
    const Eigen::Vector2d ab = poly[(i + 1) % n] - a;
    const int m = std::max(2, static_cast<int>(samples * ab.norm() / perimeter));
    Eigen::Vector2d nearest = a;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= m; ++s) {
      const Eigen::Vector2d q = a + (static_cast<double>(s) / m) * ab;
      const double d = (q - p).norm();
      if (d < nearest_d) {
        nearest_d = d;
        nearest = q;
      }
    }
    best = std::min(best, trig_metric(p, nearest));
  }
  return best;
}

Polygon random_convex_polygon(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (double& a : angles) a = 2.0 * M_PI * u(rng);
  std::sort(angles.begin(), angles.end());
  const double rx = 0.2 + 1.0 * u(rng);
  const double ry = 0.2 + 1.0 * u(rng);
  const double rot = 2.0 * M_PI * u(rng);
  const Eigen::Vector2d c(-1.0 + 2.0 * u(rng), -0.8 + 1.6 * u(rng));
  const Eigen::Rotation2Dd r(rot);
  Polygon out;
  for (double a : angles) {
    out.push_back(c + r * Eigen::Vector2d(rx * std::cos(a), ry * std::sin(a)));
  }
  return out;
}

PalmOracle palm(const std::array<Eigen::Vector3d, 5>& b) {
  PalmOracle out;
  for (int i = 0; i < 4; ++i) {
    out.normals[i] = b[i + 1].cross(b[i]).normalized();
  }
  std::array<Eigen::Vector3d, 5> e;
  e[0] = out.normals[0];
  e[4] = out.normals[3];
  for (int i = 1; i < 4; ++i) e[i] = (out.normals[i] + out.normals[i - 1]).normalized();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d db = b[i + 1] - b[i];
    out.curvature[i] = (e[i + 1] - e[i]).dot(db) / db.squaredNorm();
    const double c = b[i].normalized().dot(b[i + 1].normalized());
    out.spread[i] = std::acos(std::clamp(c, -1.0, 1.0));
  }
  return out;
}

Eigen::Matrix3d child_frame(const Eigen::Matrix3d& parent, double flexion, double abduction) {
  return parent * Eigen::AngleAxisd(flexion, Eigen::Vector3d::UnitY()).toRotationMatrix() *
         Eigen::AngleAxisd(-abduction, Eigen::Vector3d::UnitX()).toRotationMatrix();
}

std::array<double, 2> local_angles(const Eigen::Vector3d& v) {
  return {std::atan2(v.x(), v.z()), std::asin(v.y() / v.norm())};
}

std::array<Eigen::Matrix3d, 5> pip_frames(const std::array<Eigen::Vector3d, 5>& b) {
  std::array<Eigen::Vector3d, 4> n;
  for (int i = 0; i < 4; ++i) n[i] = b[i + 1].cross(b[i]).normalized();
  const std::array<Eigen::Vector3d, 5> x = {-n[0], -n[1], -(n[2] + n[1]).normalized(),
                                            -(n[3] + n[2]).normalized(), -n[3]};
  std::array<Eigen::Matrix3d, 5> out;
  for (int f = 0; f < 5; ++f) {
    const Eigen::Vector3d z = b[f].normalized();
    const Eigen::Vector3d y = z.cross(x[f]).normalized();
    out[f].col(0) = x[f];
    out[f].col(1) = y;
    out[f].col(2) = z;
  }
  return out;
}

std::array<Eigen::Vector3d, 21> forward_kinematics(
    const Eigen::Vector3d& root, const std::array<Eigen::Vector3d, 5>& root_bones,
    const std::array<double, 15>& lengths, const std::array<std::array<double, 2>, 15>& angles) {
  std::array<Eigen::Vector3d, 21> j;
  j[0] = root;
  const auto frames = pip_frames(root_bones);
  for (int f = 0; f < 5; ++f) {
    Eigen::Vector3d pos = root + root_bones[f];
    j[1 + 4 * f] = pos;
    Eigen::Matrix3d frame = frames[f];
    for (int level = 0; level < 3; ++level) {
      const int k = 3 * f + level;
      frame = child_frame(frame, angles[k][0], angles[k][1]);
      pos += lengths[k] * frame.col(2);
      j[2 + 4 * f + level] = pos;
    }
  }
  return j;
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

Eigen::Vector2d project(const Eigen::Matrix3d& k, const Eigen::Vector3d& p) {
  const Eigen::Vector3d h = k * p;
  return {h.x() / h.z(), h.y() / h.z()};
}

bmc::Joints<double> central_difference(const std::function<double(const bmc::HandPose&)>& f,
                                       const bmc::HandPose& pose, double step) {
  bmc::Joints<double> g{};
  for (std::size_t j = 0; j < 21; ++j) {
    for (int c = 0; c < 3; ++c) {
      bmc::Joints<double> a = pose.joints();
      bmc::Joints<double> b = pose.joints();
      a[j][c] += step;
      b[j][c] -= step;
      g[j][c] = (f(bmc::HandPose(a)) - f(bmc::HandPose(b))) / (2.0 * step);
    }
  }
  return g;
}

bmc::HandPose transform(const bmc::HandPose& pose, const Eigen::Matrix3d& r,
                        const Eigen::Vector3d& t) {
  bmc::Joints<double> out;
  for (std::size_t j = 0; j < 21; ++j) {
    out[j] = bv(r * ev(pose.joints()[j]) + t);
  }
  return bmc::HandPose(out);
}

}  // namespace oracle

#pragma once

// Palm geometry spanned by the five root bones: plane normals between
// neighbouring root bones, per-bone edge normals, discrete curvature of the
// root-bone fan and the angular distances between neighbouring root bones.
//
// Curvature scales as 1/s under uniform scaling of the pose by s; limits
// must be fitted in the same length unit as the poses they are applied to.
// c_i > 0 when the fan bends away from its plane normals n_i.

#include <array>

#include "bmc/hand_model.hpp"

namespace bmc {

template <typename T>
struct PalmDescriptorT {
  std::array<Vec3<T>, 4> plane_normals;  // n_i = norm(b_{i+1} x b_i)
  std::array<Vec3<T>, 5> edge_normals;   // e_i
  std::array<T, 4> curvatures;           // c_i
  std::array<T, 4> angular_distances;    // phi_i = angle(b_i, b_{i+1})
};

using PalmDescriptor = PalmDescriptorT<double>;

template <typename T>
PalmDescriptorT<T> compute_palm(const Bones<T>& bones) {
  PalmDescriptorT<T> palm;
  for (int i = 0; i < 4; ++i) {
    const auto& b0 = bones[static_cast<std::size_t>(i)];
    const auto& b1 = bones[static_cast<std::size_t>(i + 1)];
    palm.plane_normals[static_cast<std::size_t>(i)] =
        normalized(cross(b1, b0), ErrorKind::DegeneratePalm, i);
  }
  const auto& n = palm.plane_normals;
  palm.edge_normals[0] = n[0];
  for (int i = 1; i < 4; ++i) {
    palm.edge_normals[static_cast<std::size_t>(i)] =
        normalized(n[static_cast<std::size_t>(i)] + n[static_cast<std::size_t>(i - 1)],
                   ErrorKind::DegeneratePalm, i);
  }
  palm.edge_normals[4] = n[3];

  for (int i = 0; i < 4; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Vec3<T> db = bones[k + 1] - bones[k];
    const T len2 = dot(db, db);
    if (math::value_of(len2) < kEpsilon * kEpsilon) {
      throw Error(ErrorKind::DegeneratePalm, "coincident neighbouring root bones", i);
    }
    const Vec3<T> de = palm.edge_normals[k + 1] - palm.edge_normals[k];
    palm.curvatures[k] = dot(de, db) / len2;
    palm.angular_distances[k] = angle_between(bones[k], bones[k + 1]);
  }
  return palm;
}

// Throws DegeneratePalm when a plane normal or bone difference vanishes.
PalmDescriptor palm_descriptor(const BoneSet& bones);

struct PalmLimits {
  std::array<Interval, 4> curvature;
  std::array<Interval, 4> angular_distance;
};

// L_RB: quarter of the summed curvature and angular-distance penalties.
template <typename T>
T root_bone_loss_t(const PalmDescriptorT<T>& palm, const PalmLimits& limits) {
  T sum(0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    sum += interval_penalty(palm.curvatures[i], limits.curvature[i]);
    sum += interval_penalty(palm.angular_distances[i], limits.angular_distance[i]);
  }
  return sum / 4.0;
}

double root_bone_loss(const PalmDescriptor& palm, const PalmLimits& limits);

}  // namespace bmc

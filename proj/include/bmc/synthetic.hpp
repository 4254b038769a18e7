#pragma once

// Seeded generator of plausible right-hand poses by forward kinematics, plus
// rigid-motion and perturbation helpers used by grad-check and the tests.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "bmc/joint_angles.hpp"

namespace bmc {

using Rng = std::mt19937_64;

struct RigidMotion {
  std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3d translation{};

  Vec3d apply(const Vec3d& p) const;
  HandPose apply(const HandPose& pose) const;
};

// Uniformly distributed rotation (normalized Gaussian quaternion).
std::array<std::array<double, 3>, 3> random_rotation(Rng& rng);

// Random rotation and a translation with coordinates in [-extent, extent].
RigidMotion random_rigid_motion(Rng& rng, double extent);

struct SyntheticOptions {
  std::size_t count = 100;
  std::uint64_t seed = 0;
  // Multiplies every length; 1 gives a hand in meters.
  double scale = 1.0;
  // Apply a random rigid motion to each pose.
  bool random_motion = true;
  double translation_extent = 0.5;
  // Root joint translated to this depth (before the random motion).
  double depth = 0.0;
};

HandPose random_hand_pose(Rng& rng, const SyntheticOptions& options);
std::vector<HandPose> synthetic_corpus(const SyntheticOptions& options);

// Adds N(0, sigma^2) noise to every coordinate.
HandPose perturb_pose(const HandPose& pose, double sigma, Rng& rng);

}  // namespace bmc

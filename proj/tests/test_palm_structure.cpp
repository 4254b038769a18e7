#include <gtest/gtest.h>

#include <cmath>

#include "bmc/palm_structure.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bmc;

namespace {

Bones<double> with_root_bones(const std::array<Eigen::Vector3d, 5>& rb) {
  Bones<double> bones = bones_from_pose(fixtures::sample_pose()).bones;
  for (std::size_t i = 0; i < 5; ++i) bones[i] = oracle::bv(rb[i]);
  return bones;
}

// Fan of five root bones in the x-z plane at the given angles from +z,
// lifted by `lift[i]` along +y.
std::array<Eigen::Vector3d, 5> fan(const std::array<double, 5>& angles,
                                   const std::array<double, 5>& lengths,
                                   const std::array<double, 5>& lift = {}) {
  std::array<Eigen::Vector3d, 5> out;
  for (std::size_t i = 0; i < 5; ++i) {
    out[i] = Eigen::Vector3d(lengths[i] * std::sin(angles[i]), lift[i],
                             lengths[i] * std::cos(angles[i]));
  }
  return out;
}

}  // namespace

TEST(Palm, FlatFanHasZeroCurvature) {
  const auto rb = fan({-0.6, -0.2, 0.0, 0.15, 0.4}, {0.05, 0.09, 0.095, 0.088, 0.08});
  const PalmDescriptor palm = compute_palm(with_root_bones(rb));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(palm.curvatures[static_cast<std::size_t>(i)], 0.0, 1e-12);
}

TEST(Palm, CoplanarFanInAnyOrientationHasZeroCurvature) {
  // Property: a coplanar fan stays flat under random rotations.
  oracle::Rng rng(7);
  std::uniform_real_distribution<double> u(0.02, 0.12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto base = fan({-0.7, -0.25, 0.0, 0.2, 0.45}, {u(rng), u(rng), u(rng), u(rng), u(rng)});
    const Eigen::Matrix3d r = oracle::random_rotation(rng);
    std::array<Eigen::Vector3d, 5> rb;
    for (std::size_t i = 0; i < 5; ++i) rb[i] = r * base[i];
    const PalmDescriptor palm = compute_palm(with_root_bones(rb));
    for (double c : palm.curvatures) EXPECT_NEAR(c, 0.0, 1e-12);
  }
}

TEST(Palm, MatchesDirectOracle) {
  oracle::Rng rng(8);
  std::normal_distribution<double> g(0.0, 0.004);
  for (int trial = 0; trial < 300; ++trial) {
    auto rb = fan({-0.6, -0.2, 0.0, 0.15, 0.4}, {0.05, 0.09, 0.095, 0.088, 0.08});
    for (auto& b : rb) b += Eigen::Vector3d(g(rng), g(rng), g(rng));
    const PalmDescriptor palm = compute_palm(with_root_bones(rb));
    const oracle::PalmOracle ref = oracle::palm(rb);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR((oracle::ev(palm.plane_normals[i]) - ref.normals[i]).norm(), 0.0, 1e-12);
      EXPECT_NEAR(palm.curvatures[i], ref.curvature[i], 1e-9 * (1.0 + std::abs(ref.curvature[i])));
      EXPECT_NEAR(palm.angular_distances[i], ref.spread[i], 1e-9);
    }
  }
}

TEST(Palm, ArchTowardThePalmIsPositive) {
  // Flat fan has normals along -y (n_i = b_{i+1} x b_i with the fan ordered
  // from -x to +x), so the palm side, where fingers flex, is +y. Lifting the
  // outer bones toward +y cups the hand.
  const std::array<double, 5> angles{-0.6, -0.2, 0.0, 0.15, 0.4};
  const std::array<double, 5> lengths{0.05, 0.09, 0.095, 0.088, 0.08};
  const PalmDescriptor flat = compute_palm(with_root_bones(fan(angles, lengths)));
  EXPECT_LT(flat.plane_normals[0].y, 0.0);

  const PalmDescriptor arched = compute_palm(
      with_root_bones(fan(angles, lengths, {0.02, 0.005, 0.0, 0.005, 0.02})));
  for (double c : arched.curvatures) EXPECT_GT(c, 0.0);
  const PalmDescriptor inverted = compute_palm(
      with_root_bones(fan(angles, lengths, {-0.02, -0.005, 0.0, -0.005, -0.02})));
  for (double c : inverted.curvatures) EXPECT_LT(c, 0.0);
}

TEST(Palm, CurvatureScalesInverselyWithLength) {
  const auto rb = fan({-0.6, -0.2, 0.0, 0.15, 0.4}, {0.05, 0.09, 0.095, 0.088, 0.08},
                      {-0.02, -0.005, 0.0, -0.004, -0.015});
  std::array<Eigen::Vector3d, 5> scaled;
  for (std::size_t i = 0; i < 5; ++i) scaled[i] = 10.0 * rb[i];
  const PalmDescriptor a = compute_palm(with_root_bones(rb));
  const PalmDescriptor b = compute_palm(with_root_bones(scaled));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(b.curvatures[i], a.curvatures[i] / 10.0, 1e-10);
    EXPECT_NEAR(b.angular_distances[i], a.angular_distances[i], 1e-12);
  }
}

TEST(Palm, AngularDistanceWorkedValue) {
  const auto rb = fan({-0.6, -0.2, 0.0, 0.15, 0.4}, {1, 1, 1, 1, 1});
  const PalmDescriptor palm = compute_palm(with_root_bones(rb));
  EXPECT_NEAR(palm.angular_distances[0], 0.4, 1e-12);
  EXPECT_NEAR(palm.angular_distances[1], 0.2, 1e-12);
  EXPECT_NEAR(palm.angular_distances[2], 0.15, 1e-12);
  EXPECT_NEAR(palm.angular_distances[3], 0.25, 1e-12);
}

TEST(Palm, ParallelNeighbouringRootBonesAreDegenerate) {
  auto rb = fan({-0.6, -0.2, 0.0, 0.15, 0.4}, {0.05, 0.09, 0.095, 0.088, 0.08});
  rb[2] = 1.1 * rb[1];
  try {
    compute_palm(with_root_bones(rb));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegeneratePalm);
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(Palm, RootBoneLossIsZeroInsideAndAveragesPenalties) {
  const PalmDescriptor palm = palm_descriptor(bones_from_pose(fixtures::sample_pose()));
  PalmLimits limits;
  for (std::size_t i = 0; i < 4; ++i) {
    limits.curvature[i] = Interval::make(palm.curvatures[i] - 1.0, palm.curvatures[i] + 1.0);
    limits.angular_distance[i] =
        Interval::make(palm.angular_distances[i] - 0.1, palm.angular_distances[i] + 0.1);
  }
  EXPECT_EQ(root_bone_loss(palm, limits), 0.0);
  limits.curvature[2] = Interval::make(palm.curvatures[2] + 2.0, palm.curvatures[2] + 3.0);
  limits.angular_distance[0] =
      Interval::make(palm.angular_distances[0] - 0.5, palm.angular_distances[0] - 0.3);
  EXPECT_NEAR(root_bone_loss(palm, limits), (2.0 + 0.3) / 4.0, 1e-12);
}

TEST(Palm, InvariantUnderRigidMotion) {
  oracle::Rng rng(9);
  const HandPose pose = fixtures::sample_pose();
  const PalmDescriptor ref = palm_descriptor(bones_from_pose(pose));
  for (int trial = 0; trial < 100; ++trial) {
    const HandPose moved =
        oracle::transform(pose, oracle::random_rotation(rng), Eigen::Vector3d(0.3, -1.0, 2.0));
    const PalmDescriptor p = palm_descriptor(bones_from_pose(moved));
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(p.curvatures[i], ref.curvatures[i], 1e-9);
      EXPECT_NEAR(p.angular_distances[i], ref.angular_distances[i], 1e-12);
    }
  }
}

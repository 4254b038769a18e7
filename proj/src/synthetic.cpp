#include "bmc/synthetic.hpp"

#include <cmath>

namespace bmc {

namespace {

// Root bones of a right hand in meters: fingers along +z, thumb toward -x,
// palm facing +y (the side fingers flex toward) and slightly cupped.
constexpr std::array<std::array<double, 3>, 5> kRootBones = {{
    {-0.025, 0.014, 0.030},
    {-0.022, 0.000, 0.090},
    {0.000, 0.000, 0.095},
    {0.020, 0.003, 0.088},
    {0.038, 0.008, 0.080},
}};

constexpr std::array<std::array<double, 3>, 5> kPhalanxLengths = {{
    {0.035, 0.030, 0.025},
    {0.045, 0.025, 0.022},
    {0.050, 0.030, 0.024},
    {0.046, 0.028, 0.023},
    {0.035, 0.020, 0.020},
}};

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

Vec3d RigidMotion::apply(const Vec3d& p) const {
  const auto& r = rotation;
  return Vec3d{r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z,
               r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z,
               r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z} +
         translation;
}

HandPose RigidMotion::apply(const HandPose& pose) const {
  Joints<double> out;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    out[j] = apply(pose.joints()[j]);
  }
  return HandPose(out);
}

std::array<std::array<double, 3>, 3> random_rotation(Rng& rng) {
  std::normal_distribution<double> normal;
  double w, x, y, z, n;
  do {
    w = normal(rng);
    x = normal(rng);
    y = normal(rng);
    z = normal(rng);
    n = std::sqrt(w * w + x * x + y * y + z * z);
  } while (n < 1e-6);
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

RigidMotion random_rigid_motion(Rng& rng, double extent) {
  RigidMotion m;
  m.rotation = random_rotation(rng);
  m.translation = {uniform(rng, -extent, extent), uniform(rng, -extent, extent),
                   uniform(rng, -extent, extent)};
  return m;
}

HandPose random_hand_pose(Rng& rng, const SyntheticOptions& options) {
  const double size = options.scale * uniform(rng, 0.85, 1.15);
  std::array<Vec3d, 5> root_bones;
  for (std::size_t f = 0; f < 5; ++f) {
    const auto& b = kRootBones[f];
    root_bones[f] = size * Vec3d{b[0] + uniform(rng, -0.003, 0.003),
                                 b[1] + uniform(rng, -0.003, 0.003),
                                 b[2] + uniform(rng, -0.003, 0.003)};
  }
  std::array<double, kNumFingerBones> lengths;
  std::array<AnglePair, kNumFingerBones> angles;
  for (std::size_t f = 0; f < 5; ++f) {
    for (std::size_t level = 0; level < 3; ++level) {
      const std::size_t k = 3 * f + level;
      lengths[k] = size * kPhalanxLengths[f][level] * uniform(rng, 0.9, 1.1);
      if (level == 0) {
        angles[k] = {uniform(rng, -0.3, 1.2), uniform(rng, -0.3, 0.3)};
      } else {
        angles[k] = {uniform(rng, -0.1, 1.4), uniform(rng, -0.1, 0.1)};
      }
    }
  }
  const HandPose local =
      synthesize_pose(Vec3d{0.0, 0.0, options.depth}, root_bones, lengths, angles);
  if (!options.random_motion) {
    return local;
  }
  return random_rigid_motion(rng, options.translation_extent * options.scale).apply(local);
}

std::vector<HandPose> synthetic_corpus(const SyntheticOptions& options) {
  Rng rng(options.seed);
  std::vector<HandPose> out;
  out.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    out.push_back(random_hand_pose(rng, options));
  }
  return out;
}

HandPose perturb_pose(const HandPose& pose, double sigma, Rng& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  Joints<double> out = pose.joints();
  for (Vec3d& p : out) {
    p += Vec3d{noise(rng), noise(rng), noise(rng)};
  }
  return HandPose(out);
}

}  // namespace bmc

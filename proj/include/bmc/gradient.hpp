#pragma once

#include <array>

#include "bmc/autodiff.hpp"
#include "bmc/hand_model.hpp"

namespace bmc {

// Loss value, its gradient with respect to all 63 joint coordinates, and a
// per-joint flag set where the evaluation passed through a kink (interval
// endpoint, clamp, hull boundary, tie) and the zero subgradient was used.
struct GradientReport {
  double value = 0.0;
  Joints<double> gradient{};
  std::array<bool, kNumJoints> nondifferentiable{};

  double max_abs() const;
};

// Evaluates `loss` on a fresh tape. `loss` is called with the joints as
// tape variables and must return an ad::Var.
template <typename F>
GradientReport grad(F&& loss, const HandPose& pose) {
  ad::Tape tape;
  Joints<ad::Var> joints;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const Vec3d& p = pose.joints()[j];
    joints[j] = {tape.variable(p.x), tape.variable(p.y), tape.variable(p.z)};
  }
  const ad::Var out = loss(static_cast<const Joints<ad::Var>&>(joints));

  GradientReport report;
  report.value = out.value();
  if (out.is_constant()) {
    return report;
  }
  const std::vector<double> adj = tape.adjoints(out);
  const std::vector<char> taint = tape.kink_taint(out);
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    for (int c = 0; c < 3; ++c) {
      const auto node = static_cast<std::size_t>(joints[j][c].index());
      report.gradient[j][c] = adj[node];
      if (taint[node]) {
        report.nondifferentiable[j] = true;
      }
    }
  }
  return report;
}

}  // namespace bmc

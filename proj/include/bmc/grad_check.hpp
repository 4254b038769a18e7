#pragma once

// Self-check of the L_BMC gradient against central finite differences on
// seeded random poses away from every kink.

#include <cstdint>
#include <functional>
#include <vector>

#include "bmc/losses.hpp"

namespace bmc {

struct GradCheckOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  double step = 1e-5;
  // Poses closer than this to a kink are redrawn.
  double min_margin = 1e-3;
  // Length scale of the generated hands (1 = meters).
  double scale = 10.0;
  // Limits are fitted at this quantile so that test poses violate some.
  double quantile = 0.1;
  std::size_t corpus_size = 200;
  // Noise added to test poses, relative to `scale`.
  double perturbation = 0.0005;
  std::size_t max_attempts = 100000;
  double tolerance = 1e-4;
  LossWeights weights;
  // Applied to each analytic gradient before comparison (test hook).
  std::function<void(Joints<double>&)> gradient_hook;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_sample = 0;
  std::size_t checked = 0;
  std::size_t attempts = 0;
  std::vector<double> errors;
  bool passed = false;
};

// |g - fd|_inf / max(|g|_inf, |fd|_inf, 1e-6)
double relative_gradient_error(const Joints<double>& analytic, const Joints<double>& numeric);

Joints<double> finite_difference_gradient(const HandPose& pose, const LimitSet& limits,
                                          const LossWeights& weights, double step);

// Throws InsufficientData if not enough kink-free poses were found.
GradCheckResult run_grad_check(const GradCheckOptions& options);

}  // namespace bmc

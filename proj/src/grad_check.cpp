#include "bmc/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "bmc/synthetic.hpp"

namespace bmc {

double relative_gradient_error(const Joints<double>& analytic, const Joints<double>& numeric) {
  double diff = 0.0;
  double ga = 0.0;
  double gn = 0.0;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    for (int c = 0; c < 3; ++c) {
      diff = std::max(diff, std::abs(analytic[j][c] - numeric[j][c]));
      ga = std::max(ga, std::abs(analytic[j][c]));
      gn = std::max(gn, std::abs(numeric[j][c]));
    }
  }
  return diff / std::max({ga, gn, 1e-6});
}

Joints<double> finite_difference_gradient(const HandPose& pose, const LimitSet& limits,
                                          const LossWeights& weights, double step) {
  Joints<double> out{};
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    for (int c = 0; c < 3; ++c) {
      Joints<double> plus = pose.joints();
      Joints<double> minus = pose.joints();
      plus[j][c] += step;
      minus[j][c] -= step;
      const double fp = bmc_value(HandPose(plus), limits, weights);
      const double fm = bmc_value(HandPose(minus), limits, weights);
      out[j][c] = (fp - fm) / (2.0 * step);
    }
  }
  return out;
}

GradCheckResult run_grad_check(const GradCheckOptions& options) {
  SyntheticOptions gen;
  gen.count = options.corpus_size;
  gen.seed = options.seed;
  gen.scale = options.scale;
  FitOptions fit;
  fit.quantile = options.quantile;
  fit.source = "grad-check";
  const LimitSet limits = fit_limits(synthetic_corpus(gen), fit).limits;

  Rng rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  GradCheckResult result;
  while (result.checked < options.samples) {
    if (result.attempts >= options.max_attempts) {
      throw Error(ErrorKind::InsufficientData,
                  "found only " + std::to_string(result.checked) + " kink-free poses in " +
                      std::to_string(result.attempts) + " attempts");
    }
    ++result.attempts;
    const HandPose pose =
        perturb_pose(random_hand_pose(rng, gen), options.perturbation * options.scale, rng);
    LossReport report;
    try {
      if (kink_margin(pose, limits) < options.min_margin) {
        continue;
      }
      report = bmc_loss(pose, limits, options.weights);
    } catch (const Error& e) {
      if (e.is_degeneracy()) continue;
      throw;
    }
    if (report.total == 0.0) {
      continue;
    }
    Joints<double> analytic = report.gradient.gradient;
    if (options.gradient_hook) {
      options.gradient_hook(analytic);
    }
    const Joints<double> numeric =
        finite_difference_gradient(pose, limits, options.weights, options.step);
    const double err = relative_gradient_error(analytic, numeric);
    if (err > result.max_relative_error || result.errors.empty()) {
      result.max_relative_error = std::max(result.max_relative_error, err);
      result.worst_sample = result.checked;
    }
    result.errors.push_back(err);
    ++result.checked;
  }
  result.passed = result.max_relative_error < options.tolerance;
  return result;
}

}  // namespace bmc

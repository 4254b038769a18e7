#include "bmc/feasibility_projection.hpp"

#include <cmath>

namespace bmc {

void ProjectionConfig::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (max_iterations < 0) {
    throw Error(ErrorKind::InvalidArgument, "max_iterations must be >= 0");
  }
  if (!(std::isfinite(threshold) && threshold >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "threshold must be finite and >= 0");
  }
  if (!(std::isfinite(anchor) && anchor >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "anchor must be finite and >= 0");
  }
  if (!positive(initial_step)) {
    throw Error(ErrorKind::InvalidArgument, "initial_step must be positive");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "backtrack_factor must lie in (0, 1)");
  }
  if (!(sufficient_decrease > 0.0 && sufficient_decrease < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "sufficient_decrease must lie in (0, 1)");
  }
  if (max_backtracks < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_backtracks must be >= 1");
  }
}

namespace {

struct Evaluation {
  LossReport report;
  double objective = 0.0;
  Joints<double> gradient{};
};

Evaluation evaluate(const HandPose& pose, const HandPose& input, const LimitSet& limits,
                    const LossWeights& weights, const ProjectionConfig& config) {
  Evaluation e;
  e.report = bmc_loss(pose, limits, weights, config.loss);
  e.objective = e.report.total;
  e.gradient = e.report.gradient.gradient;
  if (config.anchor > 0.0) {
    double anchor = 0.0;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const Vec3d d = pose.joints()[j] - input.joints()[j];
      anchor += dot(d, d);
      e.gradient[j] += (2.0 * config.anchor) * d;
    }
    e.objective += config.anchor * anchor;
  }
  return e;
}

double objective_value(const HandPose& pose, const HandPose& input, const LimitSet& limits,
                       const LossWeights& weights, const ProjectionConfig& config) {
  double f = bmc_value(pose, limits, weights, config.loss);
  if (config.anchor > 0.0) {
    double anchor = 0.0;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const Vec3d d = pose.joints()[j] - input.joints()[j];
      anchor += dot(d, d);
    }
    f += config.anchor * anchor;
  }
  return f;
}

double squared_norm(const Joints<double>& g) {
  double s = 0.0;
  for (const Vec3d& v : g) {
    s += dot(v, v);
  }
  return s;
}

}  // namespace

ProjectionResult project_to_feasible(const HandPose& pose, const LimitSet& limits,
                                     const LossWeights& weights,
                                     const ProjectionConfig& config) {
  config.validate();
  weights.validate();

  ProjectionResult result;
  HandPose current = pose;
  Evaluation cur = evaluate(current, pose, limits, weights, config);
  result.trace.push_back(cur.objective);

  while (true) {
    if (cur.report.total < config.threshold) {
      result.converged = true;
      break;
    }
    if (result.iterations >= config.max_iterations) {
      break;
    }
    const double g2 = squared_norm(cur.gradient);
    if (!(g2 > 0.0) || !std::isfinite(g2)) {
      result.stalled = true;
      break;
    }
    double step = config.initial_step / std::sqrt(g2);
    bool accepted = false;
    for (int bt = 0; bt < config.max_backtracks; ++bt) {
      Joints<double> trial = current.joints();
      for (std::size_t j = 0; j < kNumJoints; ++j) {
        trial[j] -= step * cur.gradient[j];
      }
      const HandPose candidate(trial);
      // Value only while searching; the gradient is taken at the accepted point.
      const double f = objective_value(candidate, pose, limits, weights, config);
      if (f <= cur.objective - config.sufficient_decrease * step * g2) {
        current = candidate;
        cur = evaluate(current, pose, limits, weights, config);
        accepted = true;
        break;
      }
      step *= config.backtrack_factor;
    }
    if (!accepted) {
      result.stalled = true;
      break;
    }
    ++result.iterations;
    result.trace.push_back(cur.objective);
  }

  result.pose = current;
  result.final_report = std::move(cur.report);
  return result;
}

}  // namespace bmc

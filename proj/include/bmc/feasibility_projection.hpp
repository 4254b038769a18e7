#pragma once

// Moves a pose onto the feasible set (L_BMC = 0) by gradient descent with
// Armijo backtracking on L_BMC + anchor * |J - J_input|^2.

#include <vector>

#include "bmc/losses.hpp"

namespace bmc {

struct ProjectionConfig {
  int max_iterations = 2000;
  // Stop once L_BMC drops below this.
  double threshold = 1e-9;
  double anchor = 0.0;
  // First trial displacement has this length; step = initial_step / |g|.
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
  LossOptions loss{DegeneracyMode::Lenient, 1e3};

  // Throws InvalidArgument.
  void validate() const;
};

struct ProjectionResult {
  HandPose pose;
  // Objective after 0, 1, ... accepted steps.
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  // The line search found no decrease; `pose` is the best iterate.
  bool stalled = false;
  LossReport final_report;
};

ProjectionResult project_to_feasible(const HandPose& pose, const LimitSet& limits,
                                     const LossWeights& weights,
                                     const ProjectionConfig& config = {});

}  // namespace bmc

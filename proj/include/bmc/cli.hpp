#pragma once

// Batch command-line interface. `bmc` subcommands:
//   fit-limits, evaluate, project, solve-depth, grad-check
// Exit codes: 0 success / feasible, 1 violation found, 2 input error,
// 3 numerical failure.

#include <functional>
#include <iosfwd>

#include "bmc/hand_model.hpp"

namespace bmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericalFailure = 3;

struct Hooks {
  // Applied to analytic gradients by grad-check (negative-control builds).
  std::function<void(Joints<double>&)> gradient_hook;
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

}  // namespace bmc::cli

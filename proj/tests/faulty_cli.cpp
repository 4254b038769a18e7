// The bmc CLI with a deliberately wrong gradient: one coordinate of every
// analytic gradient is scaled. grad-check has to catch it.
#include <iostream>

#include "bmc/cli.hpp"

int main(int argc, char** argv) {
  bmc::cli::Hooks hooks;
  hooks.gradient_hook = [](bmc::Joints<double>& g) { g[5].y *= 1.5; };
  return bmc::cli::run(argc, argv, std::cout, std::cerr, hooks);
}

#pragma once

#include <filesystem>
#include <string>

#include "bmc/limits.hpp"
#include "bmc/synthetic.hpp"

namespace fixtures {

// Open right hand, meters, fingers along +z, thumb toward -x, palm facing +y.
inline bmc::HandPose sample_pose() {
  return bmc::HandPose(bmc::Joints<double>{{
      {0.000, 0.000, 0.000},
      {-0.025, 0.014, 0.030}, {-0.050, 0.030, 0.050}, {-0.068, 0.040, 0.068}, {-0.082, 0.047, 0.085},
      {-0.022, 0.000, 0.090}, {-0.030, 0.004, 0.135}, {-0.034, 0.010, 0.159}, {-0.036, 0.018, 0.180},
      {0.000, 0.000, 0.095}, {0.000, 0.004, 0.145}, {0.000, 0.011, 0.174}, {0.000, 0.020, 0.197},
      {0.020, 0.003, 0.088}, {0.024, 0.007, 0.133}, {0.027, 0.014, 0.160}, {0.029, 0.022, 0.182},
      {0.038, 0.008, 0.080}, {0.046, 0.012, 0.114}, {0.051, 0.017, 0.134}, {0.054, 0.023, 0.153},
  }});
}

inline std::vector<bmc::HandPose> corpus(std::size_t n = 60, std::uint64_t seed = 11,
                                         double scale = 1.0) {
  bmc::SyntheticOptions o;
  o.count = n;
  o.seed = seed;
  o.scale = scale;
  return bmc::synthetic_corpus(o);
}

// Fresh scratch directory per test.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bmc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures

#include <cstdlib>
#include <iostream>
#include <string>

#include <fmt/format.h>

#include "chromdev/calibration.hpp"

int main(int argc, char** argv) {
  chromdev::calibration::CalibrationOptions opt;
  if (argc > 1) opt.replicates = std::stoul(argv[1]);
  if (argc > 2) opt.seed = std::stoull(argv[2]);
  const auto r = chromdev::calibration::calibrate_noise(opt);
  std::cout << fmt::format("tt_purity       {:.4f}\n", r.noise.tt_purity);
  std::cout << fmt::format("tt_productivity {:.4f}\n", r.noise.tt_productivity);
  std::cout << fmt::format("fg_purity       {:.4f}\n", r.noise.fg_purity);
  for (std::size_t k = 0; k < r.target.size(); ++k) {
    std::cout << fmt::format("Y{} mean R2 {:.4f} target {:.4f}\n", k + 1, r.mean_r_squared[k],
                             r.target[k]);
  }
  return EXIT_SUCCESS;
}

#include <gtest/gtest.h>

#include "chromdev/calibration.hpp"
#include "chromdev/case_study.hpp"

using namespace chromdev;

TEST(Calibration, DefaultNoiseHitsPublishedFit) {
  const auto r2 = calibration::expected_r_squared(plant::FractionNoise{});
  const auto target = case_study::published_r_squared();
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r2[k], target[k], 0.01) << "Y" << k + 1;
}

TEST(Calibration, FitDegradesWithNoise) {
  calibration::CalibrationOptions opt;
  opt.replicates = 50;
  const auto quiet = calibration::expected_r_squared({0.01, 0.01, 0.01}, opt);
  const auto loud = calibration::expected_r_squared({0.3, 0.3, 0.3}, opt);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_GT(quiet[k], loud[k]);
  EXPECT_GT(quiet[0], 0.99);
}

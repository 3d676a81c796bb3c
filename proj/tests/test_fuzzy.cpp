#include <cmath>

#include <gtest/gtest.h>

#include "chromdev/fuzzy.hpp"
#include "oracles/oracles.hpp"

using chromdev::plant::fuzzy_control;

TEST(Fuzzy, AnchorPoints) {
  EXPECT_NEAR(fuzzy_control(0.0, 0.0), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(fuzzy_control(3.0, 0.05), 0.5);
  EXPECT_DOUBLE_EQ(fuzzy_control(-3.0, -0.05), -0.5);
  EXPECT_NEAR(fuzzy_control(1.0, 0.0), 0.31818, 2e-3);
}

TEST(Fuzzy, AgreesWithContinuousCentroid) {
  for (double e = -4.0; e <= 4.0; e += 0.37) {
    for (double r = -0.07; r <= 0.07; r += 0.011) {
      EXPECT_NEAR(fuzzy_control(e, r), oracle::mamdani_centroid(e, r), 3e-3) << e << " " << r;
    }
  }
}

TEST(Fuzzy, OddSymmetryAndMonotoneInError) {
  double prev = -1.0;
  for (double e = -3.0; e <= 3.0; e += 0.05) {
    EXPECT_NEAR(fuzzy_control(e, 0.01), -fuzzy_control(-e, -0.01), 1e-12);
    const double u = fuzzy_control(e, 0.0);
    EXPECT_GE(u, prev - 1e-12);
    EXPECT_LE(std::abs(u), 0.5);
    prev = u;
  }
}

TEST(Fuzzy, SaturatesOutsideUniverse) {
  EXPECT_DOUBLE_EQ(fuzzy_control(10.0, 0.0), fuzzy_control(3.0, 0.0));
  EXPECT_DOUBLE_EQ(fuzzy_control(0.0, -1.0), fuzzy_control(0.0, -0.05));
}

#include <cmath>

#include <gtest/gtest.h>

#include "chromdev/assay.hpp"
#include "chromdev/case_study.hpp"
#include "chromdev/plant.hpp"
#include "test_util.hpp"

using namespace chromdev;

TEST(Assay, Indicators) {
  EXPECT_DOUBLE_EQ(assay::purity(6.0, 100.0), 6.0);
  EXPECT_DOUBLE_EQ(assay::productivity(90.0, 3.0), 30.0);
  EXPECT_DOUBLE_EQ(assay::process_time({1, 1.5, 2, 1, 3, 0.8}), 3.3);
  EXPECT_TRUE(throws_code([] { (void)assay::purity(1.0, 0.0); }, Errc::zero_solids));
  EXPECT_TRUE(throws_code([] { (void)assay::productivity(1.0, 0.0); }, Errc::zero_time));
}

TEST(Assay, FractionValidation) {
  assay::FractionRecord f{10.0, 20.0, 100.0, 50.0, 3.0, "b", {1, 1, 1, 1, 1, 1}};
  EXPECT_NO_THROW(f.validate());
  auto over = f;
  over.m_fg_total = 95.0;
  EXPECT_TRUE(throws_code([&] { over.validate(); }, Errc::mass_exceeds_solids));
  auto neg = f;
  neg.volume = 0.0;
  EXPECT_THROW(neg.validate(), Error);

  const auto r = assay::responses_from_fraction(f);
  EXPECT_DOUBLE_EQ(r.tt_purity, 10.0);
  EXPECT_DOUBLE_EQ(r.fg_purity, 20.0);
  EXPECT_DOUBLE_EQ(r.tt_productivity, 10.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.fg_productivity, 20.0 / 3.0);
}

TEST(Assay, NoiselessFractionReproducesModelAtPublishedSolution) {
  const auto& ref = case_study::pareto_references().front();
  auto attrs = case_study::batch(ref.batch_id);
  attrs.tt_concentration = ref.z1;
  const auto pc = case_study::plant_config();
  const auto f = plant::synthesize_fraction(pc.truth, {0, 0, 0}, ref.params, attrs,
                                            pc.bed_volume(), {0, 0, 0});
  const auto r = assay::responses_from_fraction(f);
  EXPECT_NEAR(r.tt_purity, 6.80, 0.02);
  EXPECT_NEAR(r.tt_productivity, 96.5, 0.2);
  // Mass bookkeeping: Y1 * Y4 = Y2 * Y3.
  EXPECT_NEAR(r.tt_purity * r.fg_productivity, r.tt_productivity * r.fg_purity,
              1e-9 * r.tt_productivity * r.fg_purity);
}

TEST(Assay, FractionVolumeFromColumnGeometry) {
  const auto pc = case_study::plant_config();
  const double bed = M_PI * 1.5 * 1.5 * 36.0;
  EXPECT_NEAR(pc.bed_volume(), bed, 1e-9);
  EXPECT_NEAR(bed, 254.47, 0.01);
  const ProcessParams x{1.0, 1.5, 2.0, 1.0, 3.5, 0.86};
  const auto f = plant::synthesize_fraction(pc.truth, pc.noise, x, case_study::batch("250401"),
                                            pc.bed_volume(), {0.3, -0.2, 0.1});
  EXPECT_NEAR(f.volume, 766.0, 0.1);
  EXPECT_DOUBLE_EQ(f.process_time, assay::process_time(x));
}

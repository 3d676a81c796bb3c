#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "chromdev/case_study.hpp"
#include "chromdev/doe.hpp"
#include "test_util.hpp"

using namespace chromdev;
using namespace chromdev::doe;

namespace {

std::vector<FactorSpec> unit_factors(std::size_t k) {
  std::vector<FactorSpec> f;
  for (std::size_t j = 0; j < k; ++j) f.push_back({"X" + std::to_string(j + 1), -1.0, 1.0, ""});
  return f;
}

DesignTable screening_table() {
  DesignTable t;
  t.factors = default_factors();
  for (const auto& run : case_study::screening_runs()) {
    DesignRow row;
    for (std::size_t j = 0; j < 6; ++j) {
      row.natural.push_back(run.params[j]);
      row.coded.push_back(t.factors[j].encode(run.params[j]));
    }
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace

TEST(ConferenceMatrix, CatalogueOrdersAreValid) {
  for (std::size_t n : {2u, 4u, 6u, 8u, 10u, 12u, 14u, 16u}) {
    const auto c = conference_matrix(n);
    ASSERT_EQ(c.order(), n);
    // C^T C = (n-1) I checked here directly, not through is_valid().
    for (std::size_t a = 0; a < n; ++a) {
      EXPECT_EQ(c(a, a), 0);
      for (std::size_t b = 0; b < n; ++b) {
        int dot = 0;
        for (std::size_t r = 0; r < n; ++r) dot += c(r, a) * c(r, b);
        EXPECT_EQ(dot, a == b ? static_cast<int>(n) - 1 : 0) << "order " << n;
      }
    }
    EXPECT_TRUE(c.is_valid());
  }
}

TEST(ConferenceMatrix, UnsupportedOrders) {
  EXPECT_TRUE(throws_code([] { conference_matrix(7); }, Errc::unsupported_order));
  EXPECT_TRUE(throws_code([] { conference_matrix(18); }, Errc::unsupported_order));
  EXPECT_FALSE(ConferenceMatrix(2, {0, 1, 1, 1}).is_valid());
}

TEST(Dsd, CaseStudyShapeAndStructure) {
  const auto f = default_factors();
  const auto d = generate_dsd(f, {2, 3, 0, false});
  ASSERT_EQ(d.rows.size(), 20u);
  EXPECT_EQ(d.dummy_count, 2u);
  EXPECT_TRUE(verify_dsd(d).ok);
  std::size_t centers = 0;
  for (const auto& r : d.rows) centers += r.role == RowRole::center;
  EXPECT_EQ(centers, 4u);
  // Every column of the design is balanced and orthogonal to the others.
  for (std::size_t a = 0; a < 6; ++a) {
    double sum = 0.0;
    for (const auto& r : d.rows) sum += r.coded[a];
    EXPECT_NEAR(sum, 0.0, 1e-12);
    for (std::size_t b = a + 1; b < 6; ++b) {
      double dot = 0.0;
      for (const auto& r : d.rows) dot += r.coded[a] * r.coded[b];
      EXPECT_NEAR(dot, 0.0, 1e-12);
    }
  }
}

TEST(Dsd, MatchesPublishedScreeningRuns) {
  const auto d = generate_dsd(default_factors(), {2, 3, 0, false});
  const auto ref = screening_table();
  EXPECT_TRUE(equivalent_up_to_permutation(d, ref));
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_NEAR(d.rows[r].natural[j], ref.rows[r].natural[j], 1e-9) << "row " << r + 1;
    }
  }
}

TEST(Dsd, DefinitionalPropertiesWithoutDummies) {
  for (std::size_t k : {4u, 6u, 8u, 10u}) {
    const auto d = generate_dsd(unit_factors(k), {0, 0, 0, false});
    EXPECT_EQ(d.rows.size(), 2 * k + 1);
    EXPECT_TRUE(verify_dsd(d).ok) << k;
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t j = 0; j < k; ++j) {
        EXPECT_EQ(d.rows[2 * p].coded[j], -d.rows[2 * p + 1].coded[j]);
      }
    }
  }
  EXPECT_TRUE(throws_code([&] { generate_dsd(unit_factors(17), {}); }, Errc::unsupported_order));
}

TEST(Dsd, ShuffleIsSeededPermutation) {
  const auto f = default_factors();
  const auto a = generate_dsd(f, {2, 3, 5, true});
  const auto b = generate_dsd(f, {2, 3, 5, true});
  const auto plain = generate_dsd(f, {2, 3, 5, false});
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) EXPECT_EQ(a.rows[r].coded, b.rows[r].coded);
  EXPECT_TRUE(equivalent_up_to_permutation(a, plain));
}

TEST(Bbd, RunCountsAndLevels) {
  const std::map<std::size_t, std::size_t> edges{{3, 12}, {4, 24}, {5, 40}};
  for (auto [k, n] : edges) {
    const auto d = generate_bbd(unit_factors(k), 3);
    EXPECT_EQ(d.rows.size(), n + 3) << k;
    for (const auto& r : d.rows) {
      for (double v : r.coded) EXPECT_TRUE(v == -1.0 || v == 0.0 || v == 1.0);
    }
  }
  EXPECT_TRUE(throws_code([&] { generate_bbd(unit_factors(2), 1); },
                          Errc::unsupported_factor_count));
}

TEST(Ccd, RunCountsAndAlpha) {
  EXPECT_NEAR(ccd_alpha(3, AlphaMode::rotatable), std::pow(8.0, 0.25), 1e-12);
  EXPECT_EQ(ccd_alpha(3, AlphaMode::face_centered), 1.0);
  const auto d = generate_ccd(unit_factors(3), AlphaMode::rotatable, 2);
  EXPECT_EQ(d.rows.size(), 8u + 6u + 2u);
  std::size_t oob = 0;
  for (const auto& r : d.rows) oob += r.out_of_bounds;
  EXPECT_EQ(oob, 6u);
  const auto fc = generate_ccd(default_factors(), AlphaMode::face_centered, 1);
  EXPECT_EQ(fc.rows.size(), 64u + 12u + 1u);
  for (const auto& r : fc.rows) EXPECT_FALSE(r.out_of_bounds);
}

TEST(Allocation, BalancedAndSeeded) {
  const auto d = generate_dsd(default_factors(), {2, 3, 0, false});
  const std::vector<std::string> batches{"a", "b", "c"};
  const auto a = allocate_batches(d, batches, 4);
  std::map<std::string, int> count;
  for (const auto& r : a.rows) ++count[r.batch_id.value()];
  int lo = 100, hi = 0;
  for (auto& [k, v] : count) lo = std::min(lo, v), hi = std::max(hi, v);
  EXPECT_LE(hi - lo, 1);
  const auto b = allocate_batches(d, batches, 4);
  for (std::size_t r = 0; r < a.rows.size(); ++r) EXPECT_EQ(a.rows[r].batch_id, b.rows[r].batch_id);
  EXPECT_TRUE(throws_code([&] { allocate_batches(a, batches, 4); }, Errc::already_allocated));
}

TEST(DesignCsv, RoundTrip) {
  auto d = allocate_batches(generate_dsd(default_factors(), {2, 3, 0, false}),
                            std::vector<std::string>{"250402", "250403"}, 1);
  std::stringstream s;
  write_design_csv(s, d);
  const std::string text = s.str();
  EXPECT_EQ(text.rfind("run,X1,X2,X3,X4,X5,X6,role,batch\n", 0), 0u);
  const auto back = read_design_csv(s, default_factors(), 2);
  ASSERT_EQ(back.rows.size(), d.rows.size());
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    EXPECT_EQ(back.rows[r].natural, d.rows[r].natural);
    EXPECT_EQ(back.rows[r].coded, d.rows[r].coded);
    EXPECT_EQ(back.rows[r].role, d.rows[r].role);
    EXPECT_EQ(back.rows[r].batch_id, d.rows[r].batch_id);
  }
  std::stringstream bad("run,X1\n1,abc\n");
  EXPECT_TRUE(throws_code([&] { read_design_csv(bad, default_factors()); }, Errc::parse_error));
}

TEST(DesignRow, ParamsNeedsSixFactors) {
  const auto d = generate_dsd(unit_factors(4), {});
  EXPECT_THROW((void)d.rows[0].params(), Error);
  const auto six = generate_dsd(default_factors(), {});
  EXPECT_NO_THROW((void)six.rows[0].params());
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qindep/errors.hpp"
#include "qindep/observables.hpp"

using qindep::SampleRow;
using qindep::TruncNormDgp;

namespace {

// Reference truncated-normal cdf on [-4, 4] from std::erfc.
double ref_cdf(double z) {
  auto phi = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };
  return (phi(z) - phi(-4.0)) / (phi(4.0) - phi(-4.0));
}

const qindep::ObservedJoint& baseline_obs() {
  static const auto obs = qindep::dgp_to_observed(TruncNormDgp{}, 4096);
  return obs;
}

}  // namespace

TEST(NormalTest, CdfMatchesErfc) {
  for (double z = -8.0; z <= 8.0; z += 0.01) {
    EXPECT_NEAR(qindep::normal_cdf(z), 0.5 * std::erfc(-z / std::sqrt(2.0)),
                1e-15);
  }
}

TEST(NormalTest, QuantileInvertsCdf) {
  for (double p : {1e-6, 0.01, 0.25, 0.5, 0.75, 0.99}) {
    EXPECT_NEAR(qindep::normal_cdf(qindep::normal_quantile(p)), p, 1e-13);
  }
  EXPECT_THROW(qindep::normal_quantile(0.0), std::out_of_range);
}

TEST(TruncNormDgpTest, StandardCdfMatchesReference) {
  for (double z = -4.0; z <= 4.0; z += 0.05) {
    EXPECT_NEAR(TruncNormDgp::standard_cdf(z), ref_cdf(z), 1e-13);
  }
  EXPECT_DOUBLE_EQ(TruncNormDgp::standard_cdf(0.0), 0.5);
}

TEST(DgpToObservedTest, MediansAreZeroAndOne) {
  const auto& obs = baseline_obs();
  EXPECT_NEAR(obs.quantile(0).eval(0.5), 0.0, 1e-12);
  EXPECT_NEAR(obs.quantile(1).eval(0.5), 1.0, 1e-12);
}

TEST(DgpToObservedTest, SupportsMatchTruncation) {
  const auto& obs = baseline_obs();
  EXPECT_DOUBLE_EQ(obs.support0_lo, -4.0);
  EXPECT_DOUBLE_EQ(obs.support0_hi, 4.0);
  EXPECT_NEAR(obs.support1_lo, 1.0 - 4.4, 1e-12);
  EXPECT_NEAR(obs.support1_hi, 1.0 + 4.4, 1e-12);
  EXPECT_DOUBLE_EQ(obs.quantile(0).eval(0.0), -4.0);
  EXPECT_DOUBLE_EQ(obs.quantile(0).eval(1.0), 4.0);
}

TEST(DgpToObservedTest, ArmZeroCdfAtZeroIsHalf) {
  EXPECT_EQ(baseline_obs().cdf(0).eval(0.0), 0.5);
}

TEST(DgpToObservedTest, InterpolationErrorBelowTolerance) {
  const auto& obs = baseline_obs();
  double worst = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double y = -4.0 + 8.0 * i / 20000.0;
    worst = std::max(worst, std::abs(obs.cdf(0).eval(y) - ref_cdf(y)));
    const double y1 = 1.0 + 1.1 * y;
    worst = std::max(worst, std::abs(obs.cdf(1).eval(y1) - ref_cdf(y)));
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(DgpToObservedTest, MeansMatchSymmetry) {
  EXPECT_NEAR(baseline_obs().mean(0), 0.0, 1e-12);
  EXPECT_NEAR(baseline_obs().mean(1), 1.0, 1e-12);
}

TEST(DgpToObservedTest, QuantileInvertsCdf) {
  const auto& obs = baseline_obs();
  for (int arm : {0, 1}) {
    for (double y = -3.5; y <= 3.5; y += 0.1) {
      const double yy = arm == 1 ? 1.0 + 1.1 * y : y;
      EXPECT_NEAR(obs.cdf(arm).left_inverse(obs.cdf(arm).eval(yy)), yy, 1e-9);
    }
  }
}

TEST(DgpToObservedTest, IdenticalArmsWhenNoShift) {
  const auto obs = qindep::dgp_to_observed(TruncNormDgp{0.0, 0.0, 0.5}, 256);
  for (double q = 0.05; q < 1.0; q += 0.05) {
    EXPECT_DOUBLE_EQ(obs.quantile(0).eval(q), obs.quantile(1).eval(q));
  }
}

TEST(DgpToObservedTest, RejectsCoarseGridAndBadGamma) {
  EXPECT_THROW(qindep::dgp_to_observed(TruncNormDgp{}, 63),
               std::invalid_argument);
  EXPECT_THROW(qindep::dgp_to_observed(TruncNormDgp{-1.0, 1.0, 0.5}, 64),
               std::invalid_argument);
}

TEST(IngestSamplesTest, ShareOfTreated) {
  const auto obs =
      qindep::ingest_samples({{0.0, 0}, {1.0, 0}, {0.0, 1}, {1.0, 1}});
  EXPECT_DOUBLE_EQ(obs.p1, 0.5);
}

TEST(IngestSamplesTest, SingleArmIsDegenerate) {
  EXPECT_THROW(qindep::ingest_samples({{0.0, 1}, {1.0, 1}, {2.0, 1}}),
               qindep::DegenerateDataError);
}

TEST(IngestSamplesTest, NeedsTwoDistinctValuesPerArm) {
  EXPECT_THROW(qindep::ingest_samples({{0.0, 0}, {0.0, 0}, {0.0, 1}, {1.0, 1}}),
               qindep::DegenerateDataError);
}

TEST(IngestSamplesTest, CdfInterpolatesOrderStatistics) {
  const auto obs = qindep::ingest_samples(
      {{0.0, 0}, {1.0, 0}, {2.0, 0}, {3.0, 0}, {5.0, 1}, {6.0, 1}});
  const auto& f = obs.cdf(0);
  EXPECT_DOUBLE_EQ(f.eval(0.0), 0.0);
  EXPECT_DOUBLE_EQ(f.eval(3.0), 1.0);
  double prev = -1.0;
  for (double y = 0.0; y <= 3.0; y += 0.25) {
    EXPECT_GT(f.eval(y), prev);
    prev = f.eval(y);
  }
}

TEST(IngestSamplesTest, MonteCarloMatchesModel) {
  const auto rows = qindep::sample_dgp(TruncNormDgp{}, 100000, 20240611);
  const auto obs = qindep::ingest_samples(rows);
  EXPECT_NEAR(obs.p1, 0.5, 0.01);
  EXPECT_NEAR(obs.quantile(0).eval(0.5), 0.0, 0.02);
  EXPECT_NEAR(obs.quantile(1).eval(0.5), 1.0, 0.03);
}

TEST(IngestSamplesTest, SamplingIsDeterministic) {
  const auto a = qindep::sample_dgp(TruncNormDgp{}, 100, 7);
  const auto b = qindep::sample_dgp(TruncNormDgp{}, 100, 7);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].y, b[i].y);
    EXPECT_EQ(a[i].x, b[i].x);
  }
}

TEST(ReadSamplesCsvTest, ParsesRows) {
  std::istringstream in("y,x\n0.5,0\n-1.25,1\n");
  const auto rows = qindep::read_samples_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[1].y, -1.25);
  EXPECT_EQ(rows[1].x, 1);
}

TEST(ReadSamplesCsvTest, ReportsLineOfBadRow) {
  std::istringstream in("y,x\n0.5,0\nabc,1\n");
  try {
    qindep::read_samples_csv(in);
    FAIL() << "expected a parse error";
  } catch (const qindep::ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ReadSamplesCsvTest, RejectsBadHeaderAndTreatment) {
  std::istringstream bad_header("x,y\n1,0\n");
  EXPECT_THROW(qindep::read_samples_csv(bad_header), qindep::ParseError);
  std::istringstream bad_x("y,x\n1.0,2\n");
  EXPECT_THROW(qindep::read_samples_csv(bad_x), qindep::ParseError);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qindep/piecewise.hpp"

using qindep::MonotoneCurve;
using Knot = MonotoneCurve::Knot;

namespace {

MonotoneCurve kinked() {
  return MonotoneCurve({{0.0, 0.0}, {0.5, 1.0}, {1.0, 1.0}});
}

MonotoneCurve jump_at_half() {
  return MonotoneCurve({{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}, {1.0, 1.0}});
}

// Riemann sum at the midpoints of n cells.
double riemann(const MonotoneCurve& c, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += c.eval(lo + (i + 0.5) * h);
  return s * h;
}

}  // namespace

TEST(MonotoneCurveTest, EvalIdentity) {
  EXPECT_DOUBLE_EQ(MonotoneCurve::identity(0.0, 1.0).eval(0.3), 0.3);
}

TEST(MonotoneCurveTest, EvalIsRightContinuousAtJump) {
  const auto c = jump_at_half();
  EXPECT_DOUBLE_EQ(c.eval(0.5), 0.5);
  EXPECT_DOUBLE_EQ(c.left_limit(0.5), 0.0);
  EXPECT_FALSE(c.is_continuous());
  EXPECT_TRUE(kinked().is_continuous());
}

TEST(MonotoneCurveTest, EvalUniformCdf) {
  EXPECT_DOUBLE_EQ(MonotoneCurve::uniform_cdf().eval(0.25), 0.25);
}

TEST(MonotoneCurveTest, EvalOutsideDomainThrows) {
  const auto c = MonotoneCurve::identity(0.0, 1.0);
  EXPECT_THROW(c.eval(1.5), std::out_of_range);
  EXPECT_THROW(c.eval(-0.1), std::out_of_range);
}

TEST(MonotoneCurveTest, RejectsDecreasingKnots) {
  EXPECT_THROW(MonotoneCurve({{0.0, 1.0}, {1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(MonotoneCurve({{0.5, 0.0}, {0.2, 1.0}}), std::invalid_argument);
}

TEST(MonotoneCurveTest, CdfTagNeedsUnitRange) {
  EXPECT_THROW(MonotoneCurve({{0.0, 0.0}, {1.0, 0.5}}, true),
               std::invalid_argument);
}

TEST(MonotoneCurveTest, LeftInverseUniform) {
  EXPECT_DOUBLE_EQ(MonotoneCurve::uniform_cdf().left_inverse(0.75), 0.75);
}

TEST(MonotoneCurveTest, LeftInverseTakesInfimumOnFlat) {
  const MonotoneCurve c({{0.0, 0.0}, {0.2, 0.5}, {0.8, 0.5}, {1.0, 1.0}}, true);
  EXPECT_DOUBLE_EQ(c.left_inverse(0.5), 0.2);
  EXPECT_DOUBLE_EQ(c.right_inverse(0.5), 0.8);
}

TEST(MonotoneCurveTest, LeftInverseAtAtom) {
  const MonotoneCurve c({{0.0, 0.0}, {1.0, 0.5}, {1.0, 1.0}}, true);
  EXPECT_DOUBLE_EQ(c.left_inverse(0.9), 1.0);
}

TEST(MonotoneCurveTest, LeftInverseRejectsClosedEndpoints) {
  const auto c = MonotoneCurve::uniform_cdf();
  EXPECT_THROW(c.left_inverse(0.0), std::out_of_range);
  EXPECT_THROW(c.left_inverse(1.0), std::out_of_range);
}

TEST(MonotoneCurveTest, IntegrateExamples) {
  EXPECT_DOUBLE_EQ(MonotoneCurve::identity(0.0, 1.0).integrate(0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(MonotoneCurve::constant(0.0, 1.0, 0.5).integrate(), 0.5);
  EXPECT_NEAR(kinked().integrate(0.0, 1.0), 0.75, 1e-15);
  EXPECT_NEAR(riemann(kinked(), 0.0, 1.0, 100000), 0.75, 1e-9);
}

TEST(MonotoneCurveTest, IntegrateRejectsReversedLimits) {
  EXPECT_THROW(kinked().integrate(0.6, 0.4), std::invalid_argument);
}

TEST(MonotoneCurveTest, IntegrateAcrossJumpMatchesRiemann) {
  const auto c = jump_at_half();
  EXPECT_NEAR(c.integrate(0.1, 0.9), riemann(c, 0.1, 0.9, 200000), 1e-8);
}

TEST(MonotoneCurveTest, ConvexCombineEndpoints) {
  const auto f = MonotoneCurve::identity(0.0, 1.0);
  const auto g = kinked();
  const auto at1 = qindep::convex_combine(f, g, 1.0);
  const auto at0 = qindep::convex_combine(f, g, 0.0);
  for (const auto& k : f.knots()) EXPECT_DOUBLE_EQ(at1.eval(k.x), f.eval(k.x));
  for (const auto& k : g.knots()) EXPECT_DOUBLE_EQ(at0.eval(k.x), g.eval(k.x));
}

TEST(MonotoneCurveTest, ConvexCombineHalf) {
  const auto f = MonotoneCurve::identity(0.0, 1.0);
  const auto g = MonotoneCurve::constant(0.0, 1.0, 0.0);
  const auto h = qindep::convex_combine(f, g, 0.5);
  EXPECT_DOUBLE_EQ(h.eval(1.0), 0.5 * 1.0 + 0.5 * g.eval(1.0));
  EXPECT_DOUBLE_EQ(h.eval(0.3), 0.15);
}

TEST(MonotoneCurveTest, ConvexCombineKeepsJumps) {
  const auto h = qindep::convex_combine(jump_at_half(), kinked(), 0.5);
  EXPECT_DOUBLE_EQ(h.eval(0.5), 0.75);
  EXPECT_DOUBLE_EQ(h.left_limit(0.5), 0.5);
}

TEST(MonotoneCurveTest, ConvexCombineRejectsMismatchedDomains) {
  EXPECT_THROW(qindep::convex_combine(MonotoneCurve::identity(0.0, 1.0),
                                      MonotoneCurve::identity(0.0, 2.0), 0.5),
               std::invalid_argument);
  EXPECT_THROW(qindep::convex_combine(kinked(), kinked(), 1.5),
               std::invalid_argument);
}

TEST(MonotoneCurveTest, ComposeEvaluatesOuterAtInner) {
  const MonotoneCurve outer({{0.0, -4.0}, {1.0, 4.0}});
  const auto c = qindep::compose(outer, jump_at_half());
  EXPECT_DOUBLE_EQ(c.eval(0.25), -4.0);
  EXPECT_DOUBLE_EQ(c.eval(0.5), 0.0);
  EXPECT_DOUBLE_EQ(c.left_limit(0.5), -4.0);
  EXPECT_DOUBLE_EQ(c.eval(0.75), 2.0);
}

class RandomCurveTest : public ::testing::TestWithParam<int> {
 protected:
  MonotoneCurve make() {
    std::mt19937_64 rng(static_cast<unsigned>(GetParam()));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Knot> k{{0.0, 0.0}};
    double x = 0.0, y = 0.0;
    for (int i = 0; i < 12; ++i) {
      y += unit(rng) < 0.2 ? 0.0 : unit(rng);
      if (unit(rng) < 0.2) {
        k.push_back({x, y});  // jump
        y += unit(rng);
      }
      x += 0.05 + unit(rng);
      k.push_back({x, y});
    }
    for (auto& kn : k) {
      kn.x /= x;
      kn.y /= y;
    }
    k.back().y = 1.0;
    return MonotoneCurve(k, true);
  }
};

TEST_P(RandomCurveTest, EvalNondecreasingOnScan) {
  const auto c = make();
  double prev = c.eval(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double v = c.eval(i / 1000.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST_P(RandomCurveTest, GaloisInequality) {
  const auto c = make();
  for (int i = 1; i < 1000; ++i) {
    const double x = i / 1000.0;
    const double y = c.eval(x);
    if (y <= 0.0 || y >= 1.0) continue;
    EXPECT_LE(c.left_inverse(y), x + 1e-12);
  }
}

TEST_P(RandomCurveTest, IntegrateAdditive) {
  const auto c = make();
  for (int i = 1; i < 50; ++i) {
    const double mid = i / 50.0;
    EXPECT_NEAR(c.integrate(0.0, mid) + c.integrate(mid, 1.0), c.integrate(),
                1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomCurveTest, ::testing::Range(1, 11));

#include <gtest/gtest.h>

#include <limits>

#include "qindep/errors.hpp"
#include "qindep/serialize.hpp"

using qindep::GridPropensity;

TEST(SerializeTest, PropensityRoundTrip) {
  const GridPropensity p({0.0, 0.25, 1.0, 0.125});
  const auto doc = qindep::to_json(p);
  EXPECT_EQ(doc["n"], 4);
  const auto back = qindep::propensity_from_json(doc.dump());
  ASSERT_EQ(back.n_cells(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back[i], p[i]);
}

TEST(SerializeTest, PropensityWithoutCount) {
  EXPECT_EQ(qindep::propensity_from_json(R"({"values":[0.5,0.5]})").n_cells(),
            2u);
}

TEST(SerializeTest, MalformedPropensityIsParseError) {
  for (const char* text :
       {"{", R"({"n":2})", R"({"n":3,"values":[0.5,0.5]})",
        R"({"values":[0.5,"x"]})", R"({"values":[1.5]})", "[0.5]"}) {
    EXPECT_THROW(qindep::propensity_from_json(text), qindep::ParseError)
        << text;
  }
}

TEST(SerializeTest, VerdictWitnessFields) {
  qindep::Verdict v;
  v.pass = false;
  v.tolerance = 0.002;
  v.witness = qindep::Witness{0.0, 0.5, 0.25, 0.5};
  const auto doc = qindep::to_json(v);
  EXPECT_EQ(doc["pass"], false);
  EXPECT_EQ(doc["witness"]["t2"], 0.5);
  EXPECT_EQ(doc["witness"]["average"], 0.25);
  EXPECT_EQ(doc["witness"]["expected"], 0.5);
}

TEST(SerializeTest, IdentifiedSetFields) {
  qindep::IdentifiedSet s;
  s.param = qindep::Param::ATT;
  s.lo = -std::numeric_limits<double>::infinity();
  s.hi = 3.0;
  s.spec = qindep::IndependenceSpec::t_points({0.5});
  const auto doc = qindep::to_json(s);
  EXPECT_EQ(doc["param"], "ATT");
  EXPECT_EQ(doc["lo"], "-inf");
  EXPECT_EQ(doc["hi"], 3.0);
  EXPECT_EQ(doc["interior_sharp"], true);
  EXPECT_EQ(doc["spec"], "T{0.5}");
}

TEST(SerializeTest, VerifyReportFields) {
  qindep::VerifyReport r;
  r.spec = qindep::IndependenceSpec::u_interval(0.25, 0.75);
  r.n_cells = 1000;
  r.max_discrepancy = 0.001;
  r.worst_u = 0.3;
  r.pass = true;
  const auto doc = qindep::to_json(r);
  for (const char* key :
       {"spec", "n_cells", "max_discrepancy", "worst_u", "pass"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["spec"], "U[0.25,0.75]");
}

TEST(SerializeTest, MonotonicityReportFields) {
  qindep::MonotonicityReport r;
  r.is_monotone = false;
  r.direction_changes = 1;
  r.partition = {{0.0, 0.5}, {0.5, 1.0}};
  const auto doc = qindep::to_json(r);
  EXPECT_EQ(doc["direction_changes"], 1);
  EXPECT_EQ(doc["partition"].size(), 2u);
}

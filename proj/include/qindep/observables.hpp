#ifndef QINDEP_OBSERVABLES_HPP
#define QINDEP_OBSERVABLES_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qindep/piecewise.hpp"

namespace qindep {

// Standard normal cdf and quantile.
double normal_cdf(double z);
double normal_quantile(double p);

// The identified objects: P(X=1) and the distribution of Y given each arm.
//
// Quantile curves live on [0, 1] and are the inverses of the tabulated cdfs.
// The declared support of each arm defaults to the range of its cdf curve;
// it may be widened to an infinite endpoint, in which case bounds that put
// weight on that endpoint are reported as infinite.
struct ObservedJoint {
  double p1 = 0.5;
  MonotoneCurve cdf_y_given_x0;
  MonotoneCurve cdf_y_given_x1;
  MonotoneCurve quantile_y_given_x0;
  MonotoneCurve quantile_y_given_x1;
  double support0_lo = 0.0;
  double support0_hi = 0.0;
  double support1_lo = 0.0;
  double support1_hi = 0.0;

  double p0() const { return 1.0 - p1; }
  const MonotoneCurve& cdf(int arm) const {
    return arm == 1 ? cdf_y_given_x1 : cdf_y_given_x0;
  }
  const MonotoneCurve& quantile(int arm) const {
    return arm == 1 ? quantile_y_given_x1 : quantile_y_given_x0;
  }
  // E(Y | X = arm).
  double mean(int arm) const;
};

// Builds an ObservedJoint from strictly increasing per-arm cdf curves.
// Throws DegenerateDataError when p1 is not in (0, 1) and
// std::invalid_argument when a curve is not a strictly increasing cdf.
ObservedJoint make_observed(double p1, MonotoneCurve cdf_y_given_x0,
                            MonotoneCurve cdf_y_given_x1);

// Y | X=0 ~ N(0,1) truncated to [-4, 4]; Y | X=1 ~ pi + (1 + gamma) times the
// same variable.
struct TruncNormDgp {
  double gamma = 0.1;
  double pi = 1.0;
  double p1 = 0.5;
  static constexpr double kTruncation = 4.0;

  // The cdf of the standardized truncated normal at z.
  static double standard_cdf(double z);
  // Inverse of standard_cdf on [0, 1].
  static double standard_quantile(double q);

  double location(int arm) const { return arm == 1 ? pi : 0.0; }
  double scale(int arm) const { return arm == 1 ? 1.0 + gamma : 1.0; }
  double cdf(int arm, double y) const;
  double quantile(int arm, double q) const;
};

// Tabulates both arms on n_knots equally spaced points of each support (plus
// the centre of symmetry). Requires n_knots >= 64 and gamma > -1.
ObservedJoint dgp_to_observed(const TruncNormDgp& dgp,
                              std::size_t n_knots = 4096);

struct SampleRow {
  double y;
  int x;
};

// Per-arm cdfs interpolate linearly between the distinct order statistics.
// The value at each distinct sample point is the empirical cdf rescaled from
// [F_n(min), 1] to [0, 1]. Throws DegenerateDataError when an arm is missing
// or has fewer than two distinct values.
ObservedJoint ingest_samples(const std::vector<SampleRow>& rows);

// CSV with header `y,x`. Throws ParseError carrying the offending line.
std::vector<SampleRow> read_samples_csv(std::istream& in);
std::vector<SampleRow> read_samples_csv_file(const std::string& path);

// Draws n rows from the dgp with a fixed-seed generator.
std::vector<SampleRow> sample_dgp(const TruncNormDgp& dgp, std::size_t n,
                                  std::uint64_t seed);

}  // namespace qindep

#endif  // QINDEP_OBSERVABLES_HPP

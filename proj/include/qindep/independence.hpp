#ifndef QINDEP_INDEPENDENCE_HPP
#define QINDEP_INDEPENDENCE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qindep/independence_spec.hpp"
#include "qindep/propensity.hpp"

namespace qindep {

// An average-value violation: the average over [t1, t2] differs from
// `expected` by more than the tolerance.
struct Witness {
  double t1 = 0.0;
  double t2 = 0.0;
  double average = 0.0;
  double expected = 0.0;
};

struct Verdict {
  bool pass = true;
  std::optional<Witness> witness;
  // Covariance or weighted integral for the mean-type checks.
  std::optional<double> statistic;
  double tolerance = 0.0;
  std::string warning;
};

struct MonotonicityReport {
  bool is_monotone = true;
  int direction_changes = 0;
  // Maximal monotone runs [u_start, u_end] in cell-midpoint coordinates,
  // consecutive runs sharing the cell where the direction changes.
  std::vector<std::pair<double, double>> partition;
};

// For every t1 < t2 in T u {0, 1} (T an interval contributes a, b and every
// grid point between them), the grid average over [t1, t2] must equal the
// mean of p. Endpoints snap to the nearest cell boundary. Throws
// std::invalid_argument unless spec.kind is t_set.
Verdict check_t_independence(const GridPropensity& p,
                             const IndependenceSpec& spec);

// p must equal its mean on every cell overlapping (a, b). A zero-length
// interval passes with a warning. Throws std::invalid_argument unless
// spec.kind is u_set.
Verdict check_u_independence(const GridPropensity& p,
                             const IndependenceSpec& spec);

// Grid covariance between cell midpoints and values; passes when its
// magnitude is within tol.
Verdict check_mean_independence(const GridPropensity& p, double tol = 1e-8);

// Grid value of integral 2 u p(u) du against p1.
Verdict check_weighted_mean_constraint(const GridPropensity& p, double p1,
                                       double tol = 1e-8);

// Dispatches on spec.kind; `full` requires p to be flat on all of [0, 1].
Verdict check_independence(const GridPropensity& p,
                           const IndependenceSpec& spec);

MonotonicityReport monotonicity_report(const GridPropensity& p);

enum class StochasticOrder {
  monotone_increasing,
  monotone_decreasing,
  non_monotone
};

struct StochasticMonotonicity {
  StochasticOrder order = StochasticOrder::monotone_increasing;
  // Every column is constant in u (X independent of U).
  bool degenerate = false;
};

// cond_survival[i][j] = P(X > x_j | U = u_i) on a u-grid. Throws
// std::invalid_argument on a ragged or empty matrix or entries outside [0, 1].
StochasticMonotonicity check_stochastic_monotonicity(
    const std::vector<std::vector<double>>& cond_survival, double tol = 1e-9);

// Multi-valued treatment version of check_t_independence: every column must
// average to marginal_survival[j] over every [t1, t2]. Throws
// std::invalid_argument when the marginal has the wrong length.
Verdict check_t_independence_general(
    const std::vector<std::vector<double>>& cond_survival,
    const IndependenceSpec& spec, const std::vector<double>& marginal_survival);

}  // namespace qindep

#endif  // QINDEP_INDEPENDENCE_HPP

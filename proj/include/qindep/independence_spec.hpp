#ifndef QINDEP_INDEPENDENCE_SPEC_HPP
#define QINDEP_INDEPENDENCE_SPEC_HPP

#include <optional>
#include <string>
#include <vector>

namespace qindep {

enum class SpecKind { full, t_set, u_set, mean };

// Which relaxation of full independence between U and X is maintained.
//
// A t_set is either a finite list of quantile points or a closed interval
// [a, b]; a u_set is always an interval. Interval endpoints live in [0, 1];
// a == b is allowed (a single quantile for T, a vacuous assumption for U).
struct IndependenceSpec {
  SpecKind kind = SpecKind::full;
  bool is_interval = false;
  double a = 0.0;
  double b = 1.0;
  std::vector<double> points;
  // When unset, checks use 2/N on a grid of N cells and 1e-8 for the
  // covariance-type checks.
  std::optional<double> tolerance;

  static IndependenceSpec full();
  static IndependenceSpec mean();
  // Throws std::invalid_argument on an empty list or a point outside (0, 1).
  static IndependenceSpec t_points(std::vector<double> points);
  // Throws std::invalid_argument unless 0 <= a <= b <= 1.
  static IndependenceSpec t_interval(double a, double b);
  static IndependenceSpec u_interval(double a, double b);

  IndependenceSpec with_tolerance(double tol) const;

  // Short label such as "T[0.25,0.75]", "T{0.5}", "U[0.25,0.75]", "full".
  std::string describe() const;
};

}  // namespace qindep

#endif  // QINDEP_INDEPENDENCE_SPEC_HPP

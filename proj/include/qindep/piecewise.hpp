#ifndef QINDEP_PIECEWISE_HPP
#define QINDEP_PIECEWISE_HPP

#include <span>
#include <vector>

namespace qindep {

// A nondecreasing piecewise-linear function on a closed interval.
//
// Knots are ordered by x. Between consecutive knots with distinct x the
// function is the linear interpolant. A jump at x is encoded as two knots that
// share x, the lower value first; the function value at the jump point is the
// upper value (right continuity), and left_limit() recovers the lower one.
//
// Cdfs, quantile functions and every bound envelope in the library are
// MonotoneCurves. Instances are immutable.
class MonotoneCurve {
 public:
  struct Knot {
    double x;
    double y;
  };

  // Knots closer than this in x are merged into one abscissa.
  static constexpr double kKnotTolerance = 1e-12;

  // Throws std::invalid_argument when fewer than two distinct abscissae are
  // given, x decreases, more than two knots share an x, or y decreases by more
  // than kKnotTolerance. With is_cdf the first value must be 0 and the last 1.
  explicit MonotoneCurve(std::vector<Knot> knots, bool is_cdf = false);

  static MonotoneCurve identity(double lo, double hi);
  static MonotoneCurve constant(double lo, double hi, double value);
  // The cdf of the uniform distribution on [lo, hi].
  static MonotoneCurve uniform_cdf(double lo = 0.0, double hi = 1.0);

  double x_min() const { return knots_.front().x; }
  double x_max() const { return knots_.back().x; }
  double y_first() const { return knots_.front().y; }
  double y_last() const { return knots_.back().y; }
  bool is_cdf() const { return is_cdf_; }
  std::span<const Knot> knots() const { return knots_; }

  // Right-continuous value. Throws std::out_of_range outside the domain.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  // lim_{t -> x-} f(t); equals eval(x) except at jumps. At x_min this is the
  // first knot value.
  double left_limit(double x) const;

  // inf{x : f(x) >= q}. On a flat at level q this is the flat's left end.
  // Requires q in (0, 1) for cdfs and q in [y_first, y_last] otherwise;
  // throws std::out_of_range.
  double left_inverse(double q) const;

  // sup{x : f(x) <= q}, the right end of a flat at level q. Same domain rules
  // as left_inverse.
  double right_inverse(double q) const;

  // Versions of the two inverses that accept any q in [y_first, y_last].
  double lower_preimage(double q) const;
  double upper_preimage(double q) const;

  // Exact integral over [lo, hi]. Throws std::invalid_argument when lo > hi
  // and std::out_of_range when the interval leaves the domain.
  double integrate(double lo, double hi) const;
  double integrate() const { return integrate(x_min(), x_max()); }

  // True when no two knots share an abscissa.
  bool is_continuous() const;

 private:
  void require_in_domain(double x) const;

  std::vector<Knot> knots_;
  bool is_cdf_ = false;
};

// eps * f + (1 - eps) * g on the union of the two knot sets. The domains must
// agree to MonotoneCurve::kKnotTolerance (std::invalid_argument otherwise).
// The result is a cdf when both inputs are.
MonotoneCurve convex_combine(const MonotoneCurve& f, const MonotoneCurve& g,
                             double eps);

// x -> outer(inner(x)). `outer` must be continuous and its domain must contain
// the range of `inner`. Exact: knots are inserted wherever inner crosses a knot
// of outer.
MonotoneCurve compose(const MonotoneCurve& outer, const MonotoneCurve& inner);

}  // namespace qindep

#endif  // QINDEP_PIECEWISE_HPP

#ifndef QINDEP_PROPENSITY_HPP
#define QINDEP_PROPENSITY_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qindep/independence_spec.hpp"
#include "qindep/piecewise.hpp"

namespace qindep {

// A latent propensity score p(u) = P(X = 1 | U = u), U ~ Unif[0, 1], stored as
// one value per cell of a uniform partition of [0, 1] into N cells. The value
// of cell i is the average of p over [i/N, (i+1)/N); its midpoint is
// (i + 0.5)/N.
class GridPropensity {
 public:
  // Throws std::invalid_argument when empty or a value leaves [0, 1].
  explicit GridPropensity(std::vector<double> values);

  std::size_t n_cells() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double midpoint(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n_cells());
  }
  // The implied P(X = 1).
  double mean() const;
  // Average of the values over cells [first, last).
  double average(std::size_t first, std::size_t last) const;

 private:
  std::vector<double> values_;
  std::vector<double> prefix_;  // prefix_[k] = sum of the first k values
};

GridPropensity constant_propensity(double p1, std::size_t n);

// Symmetric triangle on every segment of [0, 1] cut at taus: p1 - amplitude at
// the segment ends, p1 + amplitude at the segment midpoint. Cell values are
// exact cell averages, so every segment averages to p1 up to the cells that
// straddle a segment end. Throws std::invalid_argument when the values would
// leave [0, 1] or taus is not strictly increasing inside (0, 1).
GridPropensity sawtooth(double p1, const std::vector<double>& taus,
                        double amplitude, std::size_t n);

// p = 1 on [a, a + p1 (b - a)), 0 on [a + p1 (b - a), b], p1 elsewhere.
// Throws std::invalid_argument unless 0 < a < b < 1.
GridPropensity extreme_attainer(double p1, double a, double b, std::size_t n);

// Cell i gets Phi(mu(Phi^{-1}(u_i))) at the cell midpoint u_i. Throws
// EvaluationError when mu returns a non-finite value.
GridPropensity roy_propensity(const std::function<double(double)>& mu,
                              std::size_t n);

enum class Side { lower, upper };

// The bang-bang P(X = x | U = u) whose induced cdf of U given X = x attains
// the lower or upper envelope for a T- or U-interval (a single T point counts
// as [t, t]), where p_x = P(X = x). Requires 0 < a <= b < 1 and p_x in (0, 1);
// throws std::invalid_argument otherwise.
GridPropensity bound_attainer(const IndependenceSpec& spec, double p_x,
                              Side side, std::size_t n);

// F_{U|X}(u | x) = (1/p_x) * integral_0^u P(X = x | U = v) dv, where
// P(X = 1 | U) is the propensity, P(X = 0 | U) its complement, and
// p_x = P(X = arm). Knots at every cell boundary. Throws ConsistencyError when
// the propensity implies a different P(X = arm) (tolerance 1e-9).
MonotoneCurve cdf_from_propensity(const GridPropensity& p, double p_x,
                                  int arm);

}  // namespace qindep

#endif  // QINDEP_PROPENSITY_HPP

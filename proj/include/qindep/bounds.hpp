#ifndef QINDEP_BOUNDS_HPP
#define QINDEP_BOUNDS_HPP

#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "qindep/independence_spec.hpp"
#include "qindep/observables.hpp"
#include "qindep/piecewise.hpp"

namespace qindep {

enum class BoundTarget { cdf_u_given_x, quantile_y0_given_x1 };

// Lower and upper envelopes for F_{U|X}(u | x) or Q_{Y0|X}(tau | 1).
//
// Cdf envelopes are continuous. Quantile envelopes may jump; the lower one is
// read right-continuously and the upper one left-continuously, so use
// lower_at/upper_at rather than evaluating the curves directly.
struct BoundPair {
  MonotoneCurve lower;
  MonotoneCurve upper;
  BoundTarget target = BoundTarget::cdf_u_given_x;
  IndependenceSpec spec;
  // P(X = x) for cdf envelopes, P(X = 1) for quantile envelopes.
  double p_x = 0.5;
  // Set on cdf envelopes so the opposite arm can be rebuilt.
  std::optional<MonotoneCurve> f_u;
  // The assumption carries no information (zero-length U interval).
  bool vacuous = false;

  double lower_at(double t) const;
  double upper_at(double t) const;
};

// Envelopes of F_{U|X}(. | x) under T-independence on [a, b], with
// p_x = P(X = x) and a, b in the units of F_U's domain. Throws
// std::invalid_argument when a > b, [a, b] leaves the domain of F_U, or p_x
// is outside (0, 1).
BoundPair cdf_bounds_T(double a, double b, double p_x, const MonotoneCurve& f_u);

// The same under U-independence on [a, b]. A zero-length interval returns the
// no-assumption envelopes flagged vacuous.
BoundPair cdf_bounds_U(double a, double b, double p_x, const MonotoneCurve& f_u);

// Dispatch on spec: full gives F_U on both sides, a single T point t gives
// T on [t, t]. Throws std::invalid_argument for a T with several points and
// for mean independence.
BoundPair cdf_bounds(const IndependenceSpec& spec, double p_x,
                     const MonotoneCurve& f_u);

// Envelopes of Q_{Y0|X}(. | 1) on [0, 1] built from Q_{Y|X}(. | 0), under
// T- or U-independence on [a, b] (0 <= a <= b <= 1).
BoundPair quantile_bounds_T(double a, double b, const ObservedJoint& obs);
BoundPair quantile_bounds_U(double a, double b, const ObservedJoint& obs);
BoundPair quantile_bounds(const IndependenceSpec& spec,
                          const ObservedJoint& obs);

enum class Param { ATT, QTT, E_Y0_given_X1, Q_Y0_given_X1 };

std::string param_name(Param p);

// A closed interval whose interior is sharp. Endpoints may be infinite when
// the declared support of Y given X = 0 is unbounded on a side that carries
// weight.
struct IdentifiedSet {
  Param param = Param::ATT;
  double q = std::numeric_limits<double>::quiet_NaN();
  double lo = 0.0;
  double hi = 0.0;
  bool interior_sharp = true;
  IndependenceSpec spec;
  bool unbounded = false;
  std::string warning;
};

// Bounds on E(Y0 | X = 1).
IdentifiedSet mean_bounds(const IndependenceSpec& spec,
                          const ObservedJoint& obs);
// [E(Y | X = 1) - upper mean bound, E(Y | X = 1) - lower mean bound].
IdentifiedSet att_set(const IndependenceSpec& spec, const ObservedJoint& obs);
// Bounds on Q_{Y0|X}(q | 1). Throws std::out_of_range unless q is in (0, 1).
IdentifiedSet quantile_set(double q, const IndependenceSpec& spec,
                           const ObservedJoint& obs);
// [Q_{Y|X}(q | 1) - upper quantile bound, Q_{Y|X}(q | 1) - lower bound].
IdentifiedSet qtt_set(double q, const IndependenceSpec& spec,
                      const ObservedJoint& obs);

// For a cdf pair computed for arm 1 (p_x = P(X = 1)), returns
//   (eps * lower(.|1) + (1 - eps) * upper(.|1),
//    (1 - eps) * lower(.|0) + eps * upper(.|0)),
// a jointly attainable pair of conditional cdfs. Throws std::invalid_argument
// for a quantile pair or eps outside [0, 1].
std::pair<MonotoneCurve, MonotoneCurve> epsilon_mixture(const BoundPair& pair,
                                                        double eps);

}  // namespace qindep

#endif  // QINDEP_BOUNDS_HPP

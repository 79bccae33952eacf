#include "qindep/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace qindep {
namespace {

constexpr double kTol = MonotoneCurve::kKnotTolerance;

void require_px(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("p_x must lie in (0, 1)");
  }
}

void require_cdf_interval(double a, double b, const MonotoneCurve& f_u) {
  if (!f_u.is_cdf()) throw std::invalid_argument("F_U must be a cdf");
  if (!(a <= b)) throw std::invalid_argument("interval has a > b");
  if (a < f_u.x_min() - kTol || b > f_u.x_max() + kTol) {
    throw std::invalid_argument("interval leaves the domain of F_U");
  }
}

void require_rank_interval(double a, double b) {
  if (!(0.0 <= a && a <= b && b <= 1.0)) {
    throw std::invalid_argument("need 0 <= a <= b <= 1");
  }
}

// Evaluates value(u, F_U(u)) on the knots of F_U plus the given breakpoints.
// Exact whenever value is affine in F_U(u) between breakpoints.
MonotoneCurve envelope(const MonotoneCurve& f_u, std::vector<double> breaks,
                       const std::function<double(double, double)>& value) {
  for (const auto& k : f_u.knots()) breaks.push_back(k.x);
  for (double& x : breaks) x = std::clamp(x, f_u.x_min(), f_u.x_max());
  std::sort(breaks.begin(), breaks.end());
  std::vector<MonotoneCurve::Knot> knots;
  for (double u : breaks) {
    if (!knots.empty() && u - knots.back().x <= kTol) continue;
    knots.push_back({u, std::clamp(value(u, f_u.eval(u)), 0.0, 1.0)});
  }
  return MonotoneCurve(std::move(knots), true);
}

// Interval spec in the units of F_U, which need not be [0, 1].
IndependenceSpec raw_interval(SpecKind kind, double a, double b) {
  IndependenceSpec s;
  s.kind = kind;
  s.is_interval = true;
  s.a = a;
  s.b = b;
  return s;
}

BoundPair cdf_pair(MonotoneCurve lower, MonotoneCurve upper,
                   IndependenceSpec spec, double p_x,
                   const MonotoneCurve& f_u) {
  BoundPair out{std::move(lower), std::move(upper),
                BoundTarget::cdf_u_given_x, std::move(spec), p_x, f_u};
  return out;
}

BoundPair no_assumption_cdf(double p, const MonotoneCurve& f_u) {
  const auto qu = [&](double q) { return f_u.lower_preimage(q); };
  MonotoneCurve upper = envelope(f_u, {qu(p)}, [p](double, double fu) {
    return std::min(fu / p, 1.0);
  });
  MonotoneCurve lower = envelope(f_u, {qu(1.0 - p)}, [p](double, double fu) {
    return std::max((fu - 1.0) / p + 1.0, 0.0);
  });
  return cdf_pair(std::move(lower), std::move(upper), IndependenceSpec{}, p,
                  f_u);
}

// Rank-space arguments s(tau) such that the quantile envelopes are
// Q_{Y|X}(s(tau) | 0).
struct QuantileArgs {
  MonotoneCurve lower;
  MonotoneCurve upper;
  bool vacuous = false;
};

MonotoneCurve arg_curve(std::vector<MonotoneCurve::Knot> knots) {
  double x_prev = 0.0;
  double y_prev = 0.0;
  for (auto& k : knots) {
    k.x = std::max(std::clamp(k.x, 0.0, 1.0), x_prev);
    k.y = std::max(std::clamp(k.y, 0.0, 1.0), y_prev);
    x_prev = k.x;
    y_prev = k.y;
  }
  knots.front().x = 0.0;
  knots.back().x = 1.0;
  return MonotoneCurve(std::move(knots));
}

QuantileArgs args_T(double a, double b) {
  return {arg_curve({{0.0, 0.0}, {a, 0.0}, {a, a}, {b, b}, {1.0, b}}),
          arg_curve({{0.0, a}, {a, a}, {b, b}, {b, 1.0}, {1.0, 1.0}}),
          false};
}

// Case conditions are stated with the arm probability that keeps the
// argument inside [0, 1]: the lower envelope splits on (1 - (b - a)) p1 <= a
// and the upper one on (1 - (b - a)) p0 <= a; ties take the first branch.
QuantileArgs args_U(double a, double b, double p1) {
  if (b <= a) {
    return {MonotoneCurve::constant(0.0, 1.0, 0.0),
            MonotoneCurve::constant(0.0, 1.0, 1.0), true};
  }
  const double p0 = 1.0 - p1;
  const double c = 1.0 - (b - a);
  MonotoneCurve lower = [&] {
    if (c * p1 <= a) {
      const double jump = c + (b - 1.0) / p0;
      return arg_curve(
          {{0.0, 0.0}, {c, 0.0}, {c, jump}, {1.0, 1.0 + (b - 1.0) / p0}});
    }
    const double start = a / p1;
    return arg_curve({{0.0, 0.0},
                      {start, 0.0},
                      {start + (b - a), b - a},
                      {1.0, b - a}});
  }();
  MonotoneCurve upper = [&] {
    if (c * p0 <= a) {
      const double shift = (1.0 - b) / p1;
      return arg_curve({{0.0, c}, {c - shift, c}, {1.0 - shift, 1.0},
                        {1.0, 1.0}});
    }
    const double shift = a / p0;
    return arg_curve({{0.0, shift},
                      {b - a, b - a + shift},
                      {b - a, 1.0},
                      {1.0, 1.0}});
  }();
  return {std::move(lower), std::move(upper), false};
}

struct Resolved {
  enum class Family { full, t, u } family;
  double a;
  double b;
};

Resolved resolve(const IndependenceSpec& spec) {
  switch (spec.kind) {
    case SpecKind::full:
      return {Resolved::Family::full, 0.0, 1.0};
    case SpecKind::t_set:
      if (spec.is_interval) return {Resolved::Family::t, spec.a, spec.b};
      if (spec.points.size() == 1) {
        return {Resolved::Family::t, spec.points.front(), spec.points.front()};
      }
      throw std::invalid_argument(
          "closed-form bounds need T to be an interval or a single point");
    case SpecKind::u_set:
      return {Resolved::Family::u, spec.a, spec.b};
    case SpecKind::mean:
      break;
  }
  throw std::invalid_argument(
      "closed-form bounds are not available under mean independence");
}

QuantileArgs quantile_args(const IndependenceSpec& spec, double p1) {
  const Resolved r = resolve(spec);
  require_rank_interval(r.a, r.b);
  switch (r.family) {
    case Resolved::Family::full:
      return {MonotoneCurve::identity(0.0, 1.0),
              MonotoneCurve::identity(0.0, 1.0), false};
    case Resolved::Family::t:
      return args_T(r.a, r.b);
    case Resolved::Family::u:
      return args_U(r.a, r.b, p1);
  }
  throw std::logic_error("unreachable");
}

// Q_{Y|X}(s | 0) with the declared support at s = 0 and s = 1.
double q0_at(const ObservedJoint& obs, double s) {
  if (s <= 0.0) return obs.support0_lo;
  if (s >= 1.0) return obs.support0_hi;
  return obs.quantile(0).eval(s);
}

// weight * Q_{Y|X}(s | 0), zero when the weight vanishes even if the
// endpoint is infinite.
double weighted_q0(const ObservedJoint& obs, double weight, double s) {
  if (weight <= 0.0) return 0.0;
  return weight * q0_at(obs, s);
}

double integral_q0(const ObservedJoint& obs, double lo, double hi) {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  if (hi <= lo) return 0.0;
  return obs.quantile(0).integrate(lo, hi);
}

void require_observed(const ObservedJoint& obs) {
  require_px(obs.p1);
  if (obs.support0_lo > obs.quantile(0).y_first() + kTol ||
      obs.support0_hi < obs.quantile(0).y_last() - kTol) {
    throw std::invalid_argument(
        "declared support of Y given X=0 does not contain the data");
  }
}

void finish_set(IdentifiedSet& s) {
  s.unbounded = std::isinf(s.lo) || std::isinf(s.hi);
  if (s.unbounded) {
    if (!s.warning.empty()) s.warning += "; ";
    s.warning += "unbounded support: identified set has an infinite endpoint";
  }
}

}  // namespace

double BoundPair::lower_at(double t) const { return lower.eval(t); }

double BoundPair::upper_at(double t) const {
  return target == BoundTarget::quantile_y0_given_x1 ? upper.left_limit(t)
                                                     : upper.eval(t);
}

BoundPair cdf_bounds_T(double a, double b, double p_x,
                       const MonotoneCurve& f_u) {
  require_px(p_x);
  require_cdf_interval(a, b, f_u);
  const double p = p_x;
  const double fa = f_u.eval(a);
  const double fb = f_u.eval(b);
  const auto qu = [&](double q) {
    return f_u.lower_preimage(std::clamp(q, 0.0, 1.0));
  };
  const double u1 = qu(p * fa);
  const double u2 = qu(p + fb * (1.0 - p));
  MonotoneCurve upper =
      envelope(f_u, {u1, a, b, u2}, [&](double u, double fu) {
        if (u <= u1) return fu / p;
        if (u <= a) return fa;
        if (u <= b) return fu;
        if (u <= u2) return (fu - fb) / p + fb;
        return 1.0;
      });
  const double l1 = qu((1.0 - p) * fa);
  const double l2 = qu(p * fb + (1.0 - p));
  MonotoneCurve lower =
      envelope(f_u, {l1, a, b, l2}, [&](double u, double fu) {
        if (u <= l1) return 0.0;
        if (u <= a) return (fu - fa) / p + fa;
        if (u <= b) return fu;
        if (u <= l2) return fb;
        return (fu - 1.0) / p + 1.0;
      });
  return cdf_pair(std::move(lower), std::move(upper),
                  raw_interval(SpecKind::t_set, a, b), p_x, f_u);
}

BoundPair cdf_bounds_U(double a, double b, double p_x,
                       const MonotoneCurve& f_u) {
  require_px(p_x);
  require_cdf_interval(a, b, f_u);
  const double p = p_x;
  const double fa = f_u.eval(a);
  const double fb = f_u.eval(b);
  const auto spec = raw_interval(SpecKind::u_set, a, b);
  if (fb <= fa) {
    BoundPair out = no_assumption_cdf(p, f_u);
    out.spec = spec;
    out.vacuous = true;
    return out;
  }
  const auto qu = [&](double q) {
    return f_u.lower_preimage(std::clamp(q, 0.0, 1.0));
  };
  const double c = 1.0 - (fb - fa);

  MonotoneCurve lower = [&] {
    if (c * (1.0 - p) <= fa) {
      const double m1 = qu(c * (1.0 - p));
      return envelope(f_u, {m1, a, b}, [&](double u, double fu) {
        if (u <= m1) return 0.0;
        if (u <= a) return (fu - c * (1.0 - p)) / p;
        if (u <= b) return (fb - 1.0) * (1.0 - p) / p + fu;
        return (fu - 1.0) / p + 1.0;
      });
    }
    const double m2 = qu(p * (fb - fa) + 1.0 - p);
    return envelope(f_u, {a, b, m2}, [&](double u, double fu) {
      if (u <= a) return 0.0;
      if (u <= b) return fu - fa;
      if (u <= m2) return fb - fa;
      return (fu - 1.0) / p + 1.0;
    });
  }();

  MonotoneCurve upper = [&] {
    if (c * p <= fa) {
      const double n1 = qu(c * p);
      return envelope(f_u, {n1, a, b}, [&](double u, double fu) {
        if (u <= n1) return fu / p;
        if (u <= a) return c;
        if (u <= b) return 1.0 - (fb - fu);
        return 1.0;
      });
    }
    const double n2 = qu((fb - fa) * (1.0 - p) + p);
    return envelope(f_u, {a, b, n2}, [&](double u, double fu) {
      if (u <= a) return fu / p;
      if (u <= b) return fa / p + fu - fa;
      if (u <= n2) return ((fb - fa) * (p - 1.0) + fu) / p;
      return 1.0;
    });
  }();
  return cdf_pair(std::move(lower), std::move(upper), spec, p_x, f_u);
}

BoundPair cdf_bounds(const IndependenceSpec& spec, double p_x,
                     const MonotoneCurve& f_u) {
  const Resolved r = resolve(spec);
  BoundPair out = [&] {
    switch (r.family) {
      case Resolved::Family::full:
        require_px(p_x);
        return cdf_pair(f_u, f_u, spec, p_x, f_u);
      case Resolved::Family::t:
        return cdf_bounds_T(r.a, r.b, p_x, f_u);
      case Resolved::Family::u:
        return cdf_bounds_U(r.a, r.b, p_x, f_u);
    }
    throw std::logic_error("unreachable");
  }();
  out.spec = spec;
  return out;
}

BoundPair quantile_bounds_T(double a, double b, const ObservedJoint& obs) {
  return quantile_bounds(IndependenceSpec::t_interval(a, b), obs);
}

BoundPair quantile_bounds_U(double a, double b, const ObservedJoint& obs) {
  return quantile_bounds(IndependenceSpec::u_interval(a, b), obs);
}

BoundPair quantile_bounds(const IndependenceSpec& spec,
                          const ObservedJoint& obs) {
  require_observed(obs);
  QuantileArgs args = quantile_args(spec, obs.p1);
  const MonotoneCurve& q0 = obs.quantile(0);
  BoundPair out{compose(q0, args.lower), compose(q0, args.upper),
                BoundTarget::quantile_y0_given_x1, spec, obs.p1,
                std::nullopt, args.vacuous};
  return out;
}

std::string param_name(Param p) {
  switch (p) {
    case Param::ATT:
      return "ATT";
    case Param::QTT:
      return "QTT";
    case Param::E_Y0_given_X1:
      return "E_Y0_given_X1";
    case Param::Q_Y0_given_X1:
      return "Q_Y0_given_X1";
  }
  return "?";
}

IdentifiedSet mean_bounds(const IndependenceSpec& spec,
                          const ObservedJoint& obs) {
  require_observed(obs);
  const Resolved r = resolve(spec);
  require_rank_interval(r.a, r.b);
  IdentifiedSet out;
  out.param = Param::E_Y0_given_X1;
  out.spec = spec;
  const double a = r.a;
  const double b = r.b;
  const double p1 = obs.p1;
  const double p0 = obs.p0();
  const double c = 1.0 - (b - a);
  switch (r.family) {
    case Resolved::Family::full:
      out.lo = out.hi = integral_q0(obs, 0.0, 1.0);
      break;
    case Resolved::Family::t:
      out.hi = weighted_q0(obs, a, a) + integral_q0(obs, a, b) +
               weighted_q0(obs, 1.0 - b, 1.0);
      out.lo = weighted_q0(obs, a, 0.0) + integral_q0(obs, a, b) +
               weighted_q0(obs, 1.0 - b, b);
      break;
    case Resolved::Family::u:
      if (b <= a) {
        out.lo = obs.support0_lo;
        out.hi = obs.support0_hi;
        out.warning = "zero-length U interval: no-assumption bounds";
        break;
      }
      if (c * p1 <= a) {
        out.lo = weighted_q0(obs, c, 0.0) +
                 integral_q0(obs, c + (b - 1.0) / p0, (p0 + b - 1.0) / p0);
      } else {
        out.lo = weighted_q0(obs, a / p1, 0.0) + integral_q0(obs, 0.0, b - a) +
                 weighted_q0(obs, c - a / p1, b - a);
      }
      if (c * p0 <= a) {
        const double tail = (1.0 - b) / p1;
        out.hi = weighted_q0(obs, c - tail, c) + integral_q0(obs, c, 1.0) +
                 weighted_q0(obs, tail, 1.0);
      } else {
        out.hi = integral_q0(obs, a / p0, b - a + a / p0) +
                 weighted_q0(obs, c, 1.0);
      }
      break;
  }
  finish_set(out);
  return out;
}

IdentifiedSet att_set(const IndependenceSpec& spec, const ObservedJoint& obs) {
  IdentifiedSet m = mean_bounds(spec, obs);
  const double e1 = obs.mean(1);
  IdentifiedSet out = m;
  out.param = Param::ATT;
  out.lo = e1 - m.hi;
  out.hi = e1 - m.lo;
  return out;
}

IdentifiedSet quantile_set(double q, const IndependenceSpec& spec,
                           const ObservedJoint& obs) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::out_of_range("quantile level must lie in (0, 1)");
  }
  require_observed(obs);
  const QuantileArgs args = quantile_args(spec, obs.p1);
  IdentifiedSet out;
  out.param = Param::Q_Y0_given_X1;
  out.q = q;
  out.spec = spec;
  out.lo = q0_at(obs, args.lower.eval(q));
  out.hi = q0_at(obs, args.upper.left_limit(q));
  if (args.vacuous) {
    out.warning = "zero-length U interval: no-assumption bounds";
  }
  finish_set(out);
  return out;
}

IdentifiedSet qtt_set(double q, const IndependenceSpec& spec,
                      const ObservedJoint& obs) {
  IdentifiedSet qs = quantile_set(q, spec, obs);
  const double q1 = obs.quantile(1).eval(q);
  IdentifiedSet out = qs;
  out.param = Param::QTT;
  out.lo = q1 - qs.hi;
  out.hi = q1 - qs.lo;
  return out;
}

std::pair<MonotoneCurve, MonotoneCurve> epsilon_mixture(const BoundPair& pair,
                                                        double eps) {
  if (pair.target != BoundTarget::cdf_u_given_x || !pair.f_u) {
    throw std::invalid_argument("epsilon_mixture needs a cdf bound pair");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("epsilon_mixture: eps outside [0, 1]");
  }
  const BoundPair arm0 = cdf_bounds(pair.spec, 1.0 - pair.p_x, *pair.f_u);
  return {convex_combine(pair.lower, pair.upper, eps),
          convex_combine(arm0.lower, arm0.upper, 1.0 - eps)};
}

}  // namespace qindep

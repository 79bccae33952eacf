#include "qindep/propensity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qindep/errors.hpp"
#include "qindep/observables.hpp"

namespace qindep {
namespace {

constexpr double kValueSlack = 1e-12;

// A linear piece of a (possibly discontinuous) function on [x0, x1].
struct Segment {
  double x0, x1, y0, y1;
};

double segment_integral(const Segment& s, double lo, double hi) {
  const double l = std::max(lo, s.x0);
  const double r = std::min(hi, s.x1);
  if (r <= l) return 0.0;
  const double slope = (s.y1 - s.y0) / (s.x1 - s.x0);
  const double yl = s.y0 + slope * (l - s.x0);
  const double yr = s.y0 + slope * (r - s.x0);
  return 0.5 * (yl + yr) * (r - l);
}

// Exact averages of a piecewise-linear function over the N cells of [0, 1].
// Segments must be sorted and cover [0, 1]; zero-length ones are ignored.
std::vector<double> cell_averages(const std::vector<Segment>& segs,
                                  std::size_t n) {
  const double dn = static_cast<double>(n);
  std::vector<double> out(n, 0.0);
  std::size_t first = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / dn;
    const double hi = static_cast<double>(i + 1) / dn;
    while (first < segs.size() && segs[first].x1 <= lo) ++first;
    double total = 0.0;
    int pieces = 0;
    const Segment* last = nullptr;
    for (std::size_t k = first; k < segs.size() && segs[k].x0 < hi; ++k) {
      if (segs[k].x1 <= segs[k].x0) continue;
      const double part = segment_integral(segs[k], lo, hi);
      if (part != 0.0) {
        total += part;
        ++pieces;
        last = &segs[k];
      }
    }
    // A cell inside one flat piece takes its level exactly.
    const bool flat = pieces == 1 && last->y0 == last->y1 &&
                      last->x0 <= lo && last->x1 >= hi;
    out[i] = flat ? last->y0 : total * dn;
  }
  return out;
}

// Step function taking levels[k] on [breaks[k], breaks[k+1]).
std::vector<double> step_cell_averages(const std::vector<double>& breaks,
                                       const std::vector<double>& levels,
                                       std::size_t n) {
  std::vector<Segment> segs;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    segs.push_back({breaks[k], breaks[k + 1], levels[k], levels[k]});
  }
  return cell_averages(segs, n);
}

void require_cells(std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid needs at least one cell");
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

GridPropensity::GridPropensity(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("GridPropensity: no cells");
  }
  prefix_.assign(values_.size() + 1, 0.0);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double& v = values_[i];
    if (!(v >= -kValueSlack && v <= 1.0 + kValueSlack)) {
      throw std::invalid_argument("GridPropensity: value " +
                                  std::to_string(v) + " at cell " +
                                  std::to_string(i) + " outside [0, 1]");
    }
    v = std::clamp(v, 0.0, 1.0);
    prefix_[i + 1] = prefix_[i] + v;
  }
}

double GridPropensity::mean() const {
  return prefix_.back() / static_cast<double>(values_.size());
}

double GridPropensity::average(std::size_t first, std::size_t last) const {
  if (first >= last || last > values_.size()) {
    throw std::out_of_range("GridPropensity::average: bad cell range");
  }
  return (prefix_[last] - prefix_[first]) / static_cast<double>(last - first);
}

GridPropensity constant_propensity(double p1, std::size_t n) {
  require_cells(n);
  require_probability(p1, "p1");
  return GridPropensity(std::vector<double>(n, p1));
}

GridPropensity sawtooth(double p1, const std::vector<double>& taus,
                        double amplitude, std::size_t n) {
  require_cells(n);
  require_probability(p1, "p1");
  if (!std::isfinite(amplitude) || p1 - std::abs(amplitude) < -kValueSlack ||
      p1 + std::abs(amplitude) > 1.0 + kValueSlack) {
    throw std::invalid_argument(
        "sawtooth: amplitude pushes the propensity outside [0, 1]");
  }
  std::vector<double> cuts{0.0};
  for (double t : taus) {
    if (!(t > cuts.back() && t < 1.0)) {
      throw std::invalid_argument(
          "sawtooth: taus must be strictly increasing inside (0, 1)");
    }
    cuts.push_back(t);
  }
  cuts.push_back(1.0);
  std::vector<Segment> segs;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    segs.push_back({cuts[k], mid, p1 - amplitude, p1 + amplitude});
    segs.push_back({mid, cuts[k + 1], p1 + amplitude, p1 - amplitude});
  }
  return GridPropensity(cell_averages(segs, n));
}

GridPropensity extreme_attainer(double p1, double a, double b, std::size_t n) {
  require_cells(n);
  require_probability(p1, "p1");
  if (!(0.0 < a && a < b && b < 1.0)) {
    throw std::invalid_argument("extreme_attainer: need 0 < a < b < 1");
  }
  const double split = a + p1 * (b - a);
  return GridPropensity(
      step_cell_averages({0.0, a, split, b, 1.0}, {p1, 1.0, 0.0, p1}, n));
}

GridPropensity roy_propensity(const std::function<double(double)>& mu,
                              std::size_t n) {
  require_cells(n);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double y0 = normal_quantile(u);
    const double m = mu(y0);
    if (!std::isfinite(m)) {
      throw EvaluationError("roy_propensity: mu returned a non-finite value at y0=" +
                            std::to_string(y0));
    }
    values[i] = normal_cdf(m);
  }
  return GridPropensity(std::move(values));
}

GridPropensity bound_attainer(const IndependenceSpec& spec, double p_x,
                              Side side, std::size_t n) {
  require_cells(n);
  if (!(p_x > 0.0 && p_x < 1.0)) {
    throw std::invalid_argument("bound_attainer: p_x must lie in (0, 1)");
  }
  double a = spec.a;
  double b = spec.b;
  if (spec.kind == SpecKind::t_set && !spec.is_interval) {
    if (spec.points.size() != 1) {
      throw std::invalid_argument(
          "bound_attainer: T must be an interval or a single point");
    }
    a = b = spec.points.front();
  } else if (!spec.is_interval ||
             (spec.kind != SpecKind::t_set && spec.kind != SpecKind::u_set)) {
    throw std::invalid_argument(
        "bound_attainer: spec must be a T- or U-interval");
  }
  if (!(0.0 < a && a <= b && b < 1.0)) {
    throw std::invalid_argument("bound_attainer: need 0 < a <= b < 1");
  }
  const double p = p_x;
  std::vector<double> breaks;
  std::vector<double> levels;
  if (spec.kind == SpecKind::t_set) {
    if (side == Side::upper) {
      breaks = {0.0, p * a, a, b, b + p * (1.0 - b), 1.0};
      levels = {1.0, 0.0, p, 1.0, 0.0};
    } else {
      breaks = {0.0, (1.0 - p) * a, a, b, b + (1.0 - p) * (1.0 - b), 1.0};
      levels = {0.0, 1.0, p, 0.0, 1.0};
    }
  } else {
    const double outside = 1.0 - (b - a);
    if (side == Side::upper) {
      if (outside * p <= a) {
        breaks = {0.0, outside * p, a, b, 1.0};
        levels = {1.0, 0.0, p, 0.0};
      } else {
        breaks = {0.0, a, b, b + (outside * p - a), 1.0};
        levels = {1.0, p, 1.0, 0.0};
      }
    } else {
      if (outside * (1.0 - p) <= a) {
        breaks = {0.0, outside * (1.0 - p), a, b, 1.0};
        levels = {0.0, 1.0, p, 1.0};
      } else {
        breaks = {0.0, a, b, b + (outside * (1.0 - p) - a), 1.0};
        levels = {0.0, p, 0.0, 1.0};
      }
    }
  }
  return GridPropensity(step_cell_averages(breaks, levels, n));
}

MonotoneCurve cdf_from_propensity(const GridPropensity& p, double p_x,
                                  int arm) {
  if (arm != 0 && arm != 1) {
    throw std::invalid_argument("cdf_from_propensity: arm must be 0 or 1");
  }
  if (!(p_x > 0.0 && p_x <= 1.0)) {
    throw std::invalid_argument("cdf_from_propensity: p_x must lie in (0, 1]");
  }
  const double implied = arm == 1 ? p.mean() : 1.0 - p.mean();
  if (std::abs(implied - p_x) > 1e-9) {
    throw ConsistencyError("propensity implies P(X=" + std::to_string(arm) +
                           ")=" + std::to_string(implied) + ", expected " +
                           std::to_string(p_x));
  }
  const std::size_t n = p.n_cells();
  const double dn = static_cast<double>(n);
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cum[i + 1] = cum[i] + (arm == 1 ? p[i] : 1.0 - p[i]);
  }
  const double total = cum[n];
  std::vector<MonotoneCurve::Knot> knots(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    knots[k] = {static_cast<double>(k) / dn, cum[k] / total};
  }
  knots.back().y = 1.0;
  return MonotoneCurve(std::move(knots), true);
}

}  // namespace qindep

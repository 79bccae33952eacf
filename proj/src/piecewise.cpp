#include "qindep/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qindep {
namespace {

constexpr double kTol = MonotoneCurve::kKnotTolerance;

double lerp(const MonotoneCurve::Knot& a, const MonotoneCurve::Knot& b,
            double x) {
  if (x <= a.x) return a.y;
  if (x >= b.x) return b.y;
  return a.y + (b.y - a.y) * ((x - a.x) / (b.x - a.x));
}

double inverse_lerp(const MonotoneCurve::Knot& a, const MonotoneCurve::Knot& b,
                    double q) {
  if (b.y <= a.y) return a.x;
  const double t = (q - a.y) / (b.y - a.y);
  return a.x + std::clamp(t, 0.0, 1.0) * (b.x - a.x);
}

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Sorted union of the abscissae of two curves, merged at kTol.
std::vector<double> merged_abscissae(const MonotoneCurve& f,
                                     const MonotoneCurve& g) {
  std::vector<double> xs;
  xs.reserve(f.knots().size() + g.knots().size());
  for (const auto& k : f.knots()) xs.push_back(k.x);
  for (const auto& k : g.knots()) xs.push_back(k.x);
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x - out.back() > kTol) out.push_back(x);
  }
  return out;
}

}  // namespace

MonotoneCurve::MonotoneCurve(std::vector<Knot> knots, bool is_cdf)
    : is_cdf_(is_cdf) {
  std::vector<Knot> clean;
  clean.reserve(knots.size());
  std::size_t same_x = 0;
  for (const Knot& k : knots) {
    if (!std::isfinite(k.x) || !std::isfinite(k.y)) {
      throw std::invalid_argument("MonotoneCurve: non-finite knot");
    }
    if (clean.empty()) {
      clean.push_back(k);
      same_x = 1;
      continue;
    }
    Knot next = k;
    const Knot& prev = clean.back();
    if (next.x < prev.x - kTol) {
      throw std::invalid_argument("MonotoneCurve: knots out of order at x=" +
                                  describe(next.x));
    }
    if (next.y < prev.y - kTol) {
      throw std::invalid_argument("MonotoneCurve: decreasing at x=" +
                                  describe(next.x));
    }
    next.y = std::max(next.y, prev.y);
    if (next.x - prev.x <= kTol) {
      next.x = prev.x;
      if (next.y - prev.y <= kTol) continue;  // duplicate knot
      if (++same_x > 2) {
        throw std::invalid_argument(
            "MonotoneCurve: more than two knots share x=" + describe(next.x));
      }
    } else {
      same_x = 1;
    }
    clean.push_back(next);
  }
  if (clean.size() < 2 || clean.back().x - clean.front().x <= kTol) {
    throw std::invalid_argument(
        "MonotoneCurve: need two distinct abscissae");
  }
  if (is_cdf_) {
    if (std::abs(clean.front().y) > kTol ||
        std::abs(clean.back().y - 1.0) > kTol) {
      throw std::invalid_argument("MonotoneCurve: cdf must run from 0 to 1");
    }
    clean.front().y = 0.0;
    clean.back().y = 1.0;
    for (auto& c : clean) c.y = std::clamp(c.y, 0.0, 1.0);
  }
  knots_ = std::move(clean);
}

MonotoneCurve MonotoneCurve::identity(double lo, double hi) {
  return MonotoneCurve({{lo, lo}, {hi, hi}});
}

MonotoneCurve MonotoneCurve::constant(double lo, double hi, double value) {
  return MonotoneCurve({{lo, value}, {hi, value}});
}

MonotoneCurve MonotoneCurve::uniform_cdf(double lo, double hi) {
  return MonotoneCurve({{lo, 0.0}, {hi, 1.0}}, true);
}

void MonotoneCurve::require_in_domain(double x) const {
  if (!(x >= x_min() - kTol && x <= x_max() + kTol)) {
    throw std::out_of_range("MonotoneCurve: x=" + describe(x) +
                            " outside [" + describe(x_min()) + ", " +
                            describe(x_max()) + "]");
  }
}

double MonotoneCurve::eval(double x) const {
  require_in_domain(x);
  // First knot strictly to the right of x; its predecessor is the last knot
  // at or left of x, which is the upper knot of a jump pair.
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const Knot& k) { return v < k.x; });
  if (it == knots_.begin()) return knots_.front().y;
  if (it == knots_.end()) return knots_.back().y;
  return lerp(*(it - 1), *it, x);
}

double MonotoneCurve::left_limit(double x) const {
  require_in_domain(x);
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                             [](const Knot& k, double v) { return k.x < v; });
  if (it == knots_.begin()) return knots_.front().y;
  if (it == knots_.end()) return knots_.back().y;
  if (it->x == x) return it->y;
  return lerp(*(it - 1), *it, x);
}

double MonotoneCurve::lower_preimage(double q) const {
  if (!(q >= y_first() - kTol && q <= y_last() + kTol)) {
    throw std::out_of_range("MonotoneCurve: level " + describe(q) +
                            " outside the range");
  }
  auto it = std::lower_bound(knots_.begin(), knots_.end(), q,
                             [](const Knot& k, double v) { return k.y < v; });
  if (it == knots_.begin()) return knots_.front().x;
  if (it == knots_.end()) return knots_.back().x;
  return inverse_lerp(*(it - 1), *it, q);
}

double MonotoneCurve::upper_preimage(double q) const {
  if (!(q >= y_first() - kTol && q <= y_last() + kTol)) {
    throw std::out_of_range("MonotoneCurve: level " + describe(q) +
                            " outside the range");
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), q,
                             [](double v, const Knot& k) { return v < k.y; });
  if (it == knots_.begin()) return knots_.front().x;
  if (it == knots_.end()) return knots_.back().x;
  return inverse_lerp(*(it - 1), *it, q);
}

double MonotoneCurve::left_inverse(double q) const {
  if (is_cdf_ && !(q > 0.0 && q < 1.0)) {
    throw std::out_of_range("left_inverse: level " + describe(q) +
                            " outside (0, 1)");
  }
  return lower_preimage(q);
}

double MonotoneCurve::right_inverse(double q) const {
  if (is_cdf_ && !(q > 0.0 && q < 1.0)) {
    throw std::out_of_range("right_inverse: level " + describe(q) +
                            " outside (0, 1)");
  }
  return upper_preimage(q);
}

double MonotoneCurve::integrate(double lo, double hi) const {
  if (lo > hi) {
    throw std::invalid_argument("integrate: lo > hi");
  }
  require_in_domain(lo);
  require_in_domain(hi);
  lo = std::max(lo, x_min());
  hi = std::min(hi, x_max());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const Knot& a = knots_[i];
    const Knot& b = knots_[i + 1];
    if (b.x <= a.x) continue;
    const double l = std::max(lo, a.x);
    const double r = std::min(hi, b.x);
    if (r <= l) continue;
    total += 0.5 * (lerp(a, b, l) + lerp(a, b, r)) * (r - l);
  }
  return total;
}

bool MonotoneCurve::is_continuous() const {
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (knots_[i + 1].x == knots_[i].x) return false;
  }
  return true;
}

MonotoneCurve convex_combine(const MonotoneCurve& f, const MonotoneCurve& g,
                             double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("convex_combine: eps outside [0, 1]");
  }
  if (std::abs(f.x_min() - g.x_min()) > kTol ||
      std::abs(f.x_max() - g.x_max()) > kTol) {
    throw std::invalid_argument("convex_combine: domains differ");
  }
  std::vector<MonotoneCurve::Knot> knots;
  for (double x : merged_abscissae(f, g)) {
    const double left = eps * f.left_limit(x) + (1.0 - eps) * g.left_limit(x);
    const double right = eps * f.eval(x) + (1.0 - eps) * g.eval(x);
    knots.push_back({x, left});
    if (right > left) knots.push_back({x, right});
  }
  return MonotoneCurve(std::move(knots), f.is_cdf() && g.is_cdf());
}

MonotoneCurve compose(const MonotoneCurve& outer, const MonotoneCurve& inner) {
  if (!outer.is_continuous()) {
    throw std::invalid_argument("compose: outer curve has jumps");
  }
  if (inner.y_first() < outer.x_min() - kTol ||
      inner.y_last() > outer.x_max() + kTol) {
    throw std::out_of_range("compose: inner range leaves outer domain");
  }
  auto outer_at = [&](double u) {
    return outer.eval(std::clamp(u, outer.x_min(), outer.x_max()));
  };
  const auto in = inner.knots();
  const auto out = outer.knots();
  std::vector<MonotoneCurve::Knot> knots;
  knots.push_back({in[0].x, outer_at(in[0].y)});
  for (std::size_t i = 0; i + 1 < in.size(); ++i) {
    const auto& a = in[i];
    const auto& b = in[i + 1];
    if (b.x > a.x && b.y > a.y) {
      // Pull back every outer knot strictly inside (a.y, b.y).
      auto it = std::upper_bound(
          out.begin(), out.end(), a.y,
          [](double v, const MonotoneCurve::Knot& k) { return v < k.x; });
      for (; it != out.end() && it->x < b.y; ++it) {
        const double x = a.x + (it->x - a.y) / (b.y - a.y) * (b.x - a.x);
        knots.push_back({x, it->y});
      }
    }
    knots.push_back({b.x, outer_at(b.y)});
  }
  return MonotoneCurve(std::move(knots));
}

}  // namespace qindep

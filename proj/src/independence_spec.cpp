#include "qindep/independence_spec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qindep {
namespace {

void require_interval(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("interval endpoints must be finite");
  }
  if (a < 0.0 || b > 1.0) {
    throw std::invalid_argument("interval must lie in [0, 1]");
  }
  if (a > b) throw std::invalid_argument("interval has a > b");
}

}  // namespace

IndependenceSpec IndependenceSpec::full() { return IndependenceSpec{}; }

IndependenceSpec IndependenceSpec::mean() {
  IndependenceSpec s;
  s.kind = SpecKind::mean;
  return s;
}

IndependenceSpec IndependenceSpec::t_points(std::vector<double> points) {
  if (points.empty()) {
    throw std::invalid_argument("T needs at least one quantile point");
  }
  for (double t : points) {
    if (!(t > 0.0 && t < 1.0)) {
      throw std::invalid_argument("T points must lie in (0, 1)");
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  IndependenceSpec s;
  s.kind = SpecKind::t_set;
  s.points = std::move(points);
  s.a = s.points.front();
  s.b = s.points.back();
  return s;
}

IndependenceSpec IndependenceSpec::t_interval(double a, double b) {
  require_interval(a, b);
  IndependenceSpec s;
  s.kind = SpecKind::t_set;
  s.is_interval = true;
  s.a = a;
  s.b = b;
  return s;
}

IndependenceSpec IndependenceSpec::u_interval(double a, double b) {
  require_interval(a, b);
  IndependenceSpec s;
  s.kind = SpecKind::u_set;
  s.is_interval = true;
  s.a = a;
  s.b = b;
  return s;
}

IndependenceSpec IndependenceSpec::with_tolerance(double tol) const {
  if (!(tol >= 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("tolerance must be a finite value >= 0");
  }
  IndependenceSpec s = *this;
  s.tolerance = tol;
  return s;
}

std::string IndependenceSpec::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (kind) {
    case SpecKind::full:
      return "full";
    case SpecKind::mean:
      return "mean";
    case SpecKind::u_set:
      os << "U[" << a << ',' << b << ']';
      return os.str();
    case SpecKind::t_set:
      if (is_interval) {
        os << "T[" << a << ',' << b << ']';
      } else {
        os << "T{";
        for (std::size_t i = 0; i < points.size(); ++i) {
          if (i) os << ',';
          os << points[i];
        }
        os << '}';
      }
      return os.str();
  }
  return "?";
}

}  // namespace qindep

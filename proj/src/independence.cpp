#include "qindep/independence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qindep {
namespace {

constexpr double kFlat = 1e-12;

double grid_tolerance(const IndependenceSpec& spec, std::size_t n) {
  return spec.tolerance.value_or(2.0 / static_cast<double>(n));
}

std::size_t snap(double t, std::size_t n) {
  const double k = std::round(t * static_cast<double>(n));
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n)));
}

// Cell boundaries at which average-value constraints are imposed.
std::vector<std::size_t> constraint_knots(const IndependenceSpec& spec,
                                          std::size_t n) {
  std::vector<std::size_t> ks{0, n};
  if (spec.is_interval) {
    for (std::size_t k = snap(spec.a, n); k <= snap(spec.b, n); ++k) {
      ks.push_back(k);
    }
  } else {
    for (double t : spec.points) ks.push_back(snap(t, n));
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

void require_t_set(const IndependenceSpec& spec) {
  if (spec.kind != SpecKind::t_set) {
    throw std::invalid_argument("expected a T-independence spec");
  }
  if (!spec.is_interval && spec.points.empty()) {
    throw std::invalid_argument("T-independence needs a nonempty T");
  }
}

// Worst average-value violation of one column given its prefix sums.
void scan_pairs(const std::vector<double>& prefix,
                const std::vector<std::size_t>& ks, double expected,
                double tol, Verdict& v, double& worst) {
  const double n = static_cast<double>(prefix.size() - 1);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::size_t j = i + 1; j < ks.size(); ++j) {
      const std::size_t k1 = ks[i];
      const std::size_t k2 = ks[j];
      const double avg =
          (prefix[k2] - prefix[k1]) / static_cast<double>(k2 - k1);
      const double dev = std::abs(avg - expected);
      if (dev > tol && dev > worst) {
        worst = dev;
        v.pass = false;
        v.witness = Witness{static_cast<double>(k1) / n,
                            static_cast<double>(k2) / n, avg, expected};
      }
    }
  }
}

std::vector<double> prefix_of(std::span<const double> values) {
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    prefix[i + 1] = prefix[i] + values[i];
  }
  return prefix;
}

void require_matrix(const std::vector<std::vector<double>>& m) {
  if (m.empty() || m.front().empty()) {
    throw std::invalid_argument("conditional survival matrix is empty");
  }
  for (const auto& row : m) {
    if (row.size() != m.front().size()) {
      throw std::invalid_argument("conditional survival matrix is ragged");
    }
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(
            "conditional survival entries must lie in [0, 1]");
      }
    }
  }
}

}  // namespace

Verdict check_t_independence(const GridPropensity& p,
                             const IndependenceSpec& spec) {
  require_t_set(spec);
  const std::size_t n = p.n_cells();
  Verdict v;
  v.tolerance = grid_tolerance(spec, n);
  double worst = 0.0;
  scan_pairs(prefix_of(p.values()), constraint_knots(spec, n), p.mean(),
             v.tolerance, v, worst);
  return v;
}

Verdict check_u_independence(const GridPropensity& p,
                             const IndependenceSpec& spec) {
  if (spec.kind != SpecKind::u_set || !spec.is_interval) {
    throw std::invalid_argument("expected a U-independence interval");
  }
  const std::size_t n = p.n_cells();
  const double dn = static_cast<double>(n);
  Verdict v;
  v.tolerance = grid_tolerance(spec, n);
  if (spec.b <= spec.a) {
    v.warning = "zero-length U interval: the assumption is vacuous";
    return v;
  }
  const double m = p.mean();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / dn;
    const double hi = static_cast<double>(i + 1) / dn;
    if (!(lo < spec.b && hi > spec.a)) continue;
    const double dev = std::abs(p[i] - m);
    if (dev > v.tolerance && dev > worst) {
      worst = dev;
      v.pass = false;
      v.witness = Witness{lo, hi, p[i], m};
    }
  }
  return v;
}

Verdict check_mean_independence(const GridPropensity& p, double tol) {
  const std::size_t n = p.n_cells();
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) cross += p.midpoint(i) * p[i];
  cross /= static_cast<double>(n);
  // Midpoints average to exactly 1/2.
  const double cov = cross - 0.5 * p.mean();
  Verdict v;
  v.tolerance = tol;
  v.statistic = cov;
  v.pass = std::abs(cov) <= tol;
  return v;
}

Verdict check_weighted_mean_constraint(const GridPropensity& p, double p1,
                                       double tol) {
  const std::size_t n = p.n_cells();
  double weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) weighted += 2.0 * p.midpoint(i) * p[i];
  weighted /= static_cast<double>(n);
  Verdict v;
  v.tolerance = tol;
  v.statistic = weighted;
  v.pass = std::abs(weighted - p1) <= tol;
  if (!v.pass) v.witness = Witness{0.0, 1.0, weighted, p1};
  return v;
}

Verdict check_independence(const GridPropensity& p,
                           const IndependenceSpec& spec) {
  switch (spec.kind) {
    case SpecKind::t_set:
      return check_t_independence(p, spec);
    case SpecKind::u_set:
      return check_u_independence(p, spec);
    case SpecKind::mean:
      return check_mean_independence(p, spec.tolerance.value_or(1e-8));
    case SpecKind::full: {
      IndependenceSpec flat = IndependenceSpec::u_interval(0.0, 1.0);
      flat.tolerance = spec.tolerance;
      return check_u_independence(p, flat);
    }
  }
  throw std::invalid_argument("unknown spec kind");
}

MonotonicityReport monotonicity_report(const GridPropensity& p) {
  MonotonicityReport r;
  const std::size_t n = p.n_cells();
  int sign = 0;
  std::size_t run_start = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = p[i + 1] - p[i];
    if (std::abs(d) <= kFlat) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) {
      ++r.direction_changes;
      r.partition.emplace_back(p.midpoint(run_start), p.midpoint(i));
      run_start = i;
    }
    sign = s;
  }
  r.partition.emplace_back(p.midpoint(run_start), p.midpoint(n - 1));
  r.is_monotone = r.direction_changes == 0;
  return r;
}

StochasticMonotonicity check_stochastic_monotonicity(
    const std::vector<std::vector<double>>& cond_survival, double tol) {
  require_matrix(cond_survival);
  bool increasing = true;
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < cond_survival.size(); ++i) {
    for (std::size_t j = 0; j < cond_survival[i].size(); ++j) {
      const double d = cond_survival[i + 1][j] - cond_survival[i][j];
      if (d < -tol) increasing = false;
      if (d > tol) decreasing = false;
    }
  }
  StochasticMonotonicity out;
  out.degenerate = increasing && decreasing;
  if (increasing) {
    out.order = StochasticOrder::monotone_increasing;
  } else if (decreasing) {
    out.order = StochasticOrder::monotone_decreasing;
  } else {
    out.order = StochasticOrder::non_monotone;
  }
  return out;
}

Verdict check_t_independence_general(
    const std::vector<std::vector<double>>& cond_survival,
    const IndependenceSpec& spec, const std::vector<double>& marginal_survival) {
  require_t_set(spec);
  require_matrix(cond_survival);
  const std::size_t n = cond_survival.size();
  const std::size_t cols = cond_survival.front().size();
  if (marginal_survival.size() != cols) {
    throw std::invalid_argument(
        "marginal survival length does not match the number of columns");
  }
  Verdict v;
  v.tolerance = grid_tolerance(spec, n);
  const auto ks = constraint_knots(spec, n);
  double worst = 0.0;
  std::vector<double> column(n);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = cond_survival[i][j];
    scan_pairs(prefix_of(column), ks, marginal_survival[j], v.tolerance, v,
               worst);
  }
  return v;
}

}  // namespace qindep

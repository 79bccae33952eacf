#include "qindep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "qindep/bounds.hpp"
#include "qindep/errors.hpp"
#include "qindep/simplex.hpp"

namespace qindep {
namespace {

constexpr double kBudgetSlack = 1e-9;

std::size_t snap(double t, std::size_t n) {
  const double k = std::round(t * static_cast<double>(n));
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n)));
}

double prefix_value(const std::vector<double>& p, std::size_t k, double p_x) {
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += p[i];
  return s / (static_cast<double>(p.size()) * p_x);
}

void require_program(const FeasibleProgram& prog) {
  if (prog.n_cells == 0) throw std::invalid_argument("program has no cells");
  if (prog.objective_cell > prog.n_cells) {
    throw std::invalid_argument("objective cell beyond the grid");
  }
  if (!(prog.p_x > 0.0 && prog.p_x <= 1.0)) {
    throw std::invalid_argument("p_x must lie in (0, 1]");
  }
  for (const auto& c : prog.constraints) {
    if (c.first > c.last || c.last > prog.n_cells) {
      throw std::invalid_argument("constraint cell range out of bounds");
    }
  }
}

// Fills cells in the given order, each up to 1, until the budget is spent.
void fill(std::vector<double>& p, const std::vector<std::size_t>& order,
          double budget) {
  if (budget < -kBudgetSlack ||
      budget > static_cast<double>(order.size()) + kBudgetSlack) {
    throw InfeasibleProgramError("constraint block budget " +
                                 std::to_string(budget) + " does not fit " +
                                 std::to_string(order.size()) + " cells");
  }
  double left = std::max(0.0, budget);
  for (std::size_t i : order) {
    const double take = std::min(1.0, left);
    p[i] = take;
    left -= take;
  }
}

OracleSolution solve_greedy(const FeasibleProgram& prog) {
  const std::size_t n = prog.n_cells;
  const std::size_t k = prog.objective_cell;
  const bool maximize = prog.direction == Direction::max;

  std::optional<double> total;
  std::vector<AverageConstraint> blocks;
  for (const auto& c : prog.constraints) {
    if (c.first == c.last) continue;
    if (c.first == 0 && c.last == n) {
      if (total && std::abs(*total - c.average) > kBudgetSlack) {
        throw InfeasibleProgramError("conflicting full-range constraints");
      }
      total = c.average;
      continue;
    }
    blocks.push_back(c);
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
    if (blocks[i].last > blocks[i + 1].first) {
      throw std::invalid_argument(
          "greedy solver: overlapping constraint intervals are unsupported");
    }
  }

  // Order in which a block's cells receive mass: objective cells first and
  // as early as possible when maximizing, as late as possible otherwise.
  auto ordered = [&](const std::vector<std::size_t>& cells) {
    std::vector<std::size_t> in, out;
    for (std::size_t i : cells) (i < k ? in : out).push_back(i);
    std::vector<std::size_t> order;
    if (maximize) {
      order = in;
      order.insert(order.end(), out.begin(), out.end());
    } else {
      order.assign(out.rbegin(), out.rend());
      order.insert(order.end(), in.rbegin(), in.rend());
    }
    return order;
  };

  std::vector<double> p(n, 0.0);
  std::vector<bool> covered(n, false);
  double used = 0.0;
  for (const auto& blk : blocks) {
    std::vector<std::size_t> cells;
    for (std::size_t i = blk.first; i < blk.last; ++i) {
      cells.push_back(i);
      covered[i] = true;
    }
    const double budget = blk.average * static_cast<double>(cells.size());
    fill(p, ordered(cells), budget);
    used += budget;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (!covered[i]) rest.push_back(i);
  }
  if (total) {
    fill(p, ordered(rest), *total * static_cast<double>(n) - used);
  } else {
    for (std::size_t i : rest) p[i] = (maximize == (i < k)) ? 1.0 : 0.0;
  }
  const double value = prefix_value(p, k, prog.p_x);
  return {value, GridPropensity(std::move(p))};
}

OracleSolution solve_simplex(const FeasibleProgram& prog) {
  const std::size_t n = prog.n_cells;
  const std::size_t k = prog.objective_cell;
  LinearProgram lp;
  lp.n_vars = n;
  lp.cost.assign(n, 0.0);
  const double sign = prog.direction == Direction::max ? -1.0 : 1.0;
  for (std::size_t i = 0; i < k; ++i) lp.cost[i] = sign;
  for (const auto& c : prog.constraints) {
    if (c.first == c.last) continue;
    LinearProgram::Row row;
    for (std::size_t i = c.first; i < c.last; ++i) row.terms.emplace_back(i, 1.0);
    row.rhs = c.average * static_cast<double>(c.last - c.first);
    lp.rows.push_back(std::move(row));
  }
  LpSolution sol = solve_lp(lp);
  std::vector<double> p = sol.x;
  for (double& v : p) v = std::clamp(v, 0.0, 1.0);
  const double value = prefix_value(p, k, prog.p_x);
  return {value, GridPropensity(std::move(p))};
}

}  // namespace

std::vector<AverageConstraint> spec_constraints(const IndependenceSpec& spec,
                                                double p_x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid needs at least one cell");
  std::vector<AverageConstraint> out;
  switch (spec.kind) {
    case SpecKind::mean:
      throw std::invalid_argument(
          "mean independence is not an average-value constraint set");
    case SpecKind::full:
      for (std::size_t i = 0; i < n; ++i) out.push_back({i, i + 1, p_x});
      break;
    case SpecKind::t_set: {
      std::vector<std::size_t> ks{0, n};
      if (spec.is_interval) {
        for (std::size_t k = snap(spec.a, n); k <= snap(spec.b, n); ++k) {
          ks.push_back(k);
        }
      } else {
        if (spec.points.empty()) {
          throw std::invalid_argument("T-independence needs a nonempty T");
        }
        for (double t : spec.points) ks.push_back(snap(t, n));
      }
      std::sort(ks.begin(), ks.end());
      ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
      for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        out.push_back({ks[i], ks[i + 1], p_x});
      }
      break;
    }
    case SpecKind::u_set:
      for (std::size_t i = snap(spec.a, n); i < snap(spec.b, n); ++i) {
        out.push_back({i, i + 1, p_x});
      }
      break;
  }
  out.push_back({0, n, p_x});
  return out;
}

FeasibleProgram make_program(const IndependenceSpec& spec, double p_x,
                             std::size_t n, std::size_t objective_cell,
                             Direction direction) {
  FeasibleProgram prog;
  prog.n_cells = n;
  prog.objective_cell = objective_cell;
  prog.direction = direction;
  prog.p_x = p_x;
  prog.constraints = spec_constraints(spec, p_x, n);
  require_program(prog);
  return prog;
}

OracleSolution solve_extremal_cdf(const FeasibleProgram& program,
                                  Solver solver) {
  require_program(program);
  return solver == Solver::greedy ? solve_greedy(program)
                                  : solve_simplex(program);
}

VerifyReport verify_bounds(const IndependenceSpec& spec, double p_x,
                           std::size_t n_cells, bool cross_check_simplex) {
  if (n_cells < 100) {
    throw std::invalid_argument("verify_bounds needs at least 100 cells");
  }
  if (!(p_x > 0.0 && p_x < 1.0)) {
    throw std::invalid_argument("p_x must lie in (0, 1)");
  }
  const BoundPair analytic =
      cdf_bounds(spec, p_x, MonotoneCurve::uniform_cdf());
  VerifyReport rep;
  rep.spec = spec;
  rep.p_x = p_x;
  rep.n_cells = n_cells;
  const double dn = static_cast<double>(n_cells);
  for (std::size_t k = 0; k <= n_cells; ++k) {
    const double u = static_cast<double>(k) / dn;
    for (Direction dir : {Direction::max, Direction::min}) {
      const FeasibleProgram prog = make_program(spec, p_x, n_cells, k, dir);
      const double greedy = solve_extremal_cdf(prog, Solver::greedy).value;
      if (cross_check_simplex) {
        const double lp = solve_extremal_cdf(prog, Solver::simplex).value;
        rep.solver_gap = std::max(rep.solver_gap, std::abs(lp - greedy));
      }
      const double closed = dir == Direction::max ? analytic.upper_at(u)
                                                  : analytic.lower_at(u);
      const double d = std::abs(greedy - closed);
      if (d > rep.max_discrepancy) {
        rep.max_discrepancy = d;
        rep.worst_u = u;
      }
    }
  }
  rep.pass = rep.max_discrepancy <= 3.0 / dn;
  return rep;
}

double extremal_mean(const IndependenceSpec& spec, const ObservedJoint& obs,
                     Direction direction, std::size_t n_cells) {
  if (n_cells == 0) throw std::invalid_argument("grid needs at least one cell");
  const std::size_t n = n_cells;
  const double dn = static_cast<double>(n);
  const MonotoneCurve& q0 = obs.quantile(0);
  const bool maximize = direction == Direction::max;

  // Y0 given X = 1 is the law of Q_{Y|X}(S | 0) for a rank variable S whose
  // distribution H has slope 1 on the arm-0 ranks of the constrained band
  // and is otherwise free. Free mass below the band sits on nodes j/N at or
  // below its start, free mass above on nodes at or above its end.
  std::vector<double> band(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    band[i + 1] = band[i] + q0.integrate(static_cast<double>(i) / dn,
                                         static_cast<double>(i + 1) / dn);
  }
  auto node = [&](std::size_t j) {
    if (j == 0) return obs.support0_lo;
    if (j >= n) return obs.support0_hi;
    return q0.eval(static_cast<double>(j) / dn);
  };
  auto mass_at = [](double w, double v) { return w <= 0.0 ? 0.0 : w * v; };
  // Value with the band on cells [j, j + m) and `below` free mass under it.
  auto value = [&](std::size_t j, std::size_t m, double below) {
    const double above = std::max(0.0, 1.0 - static_cast<double>(m) / dn - below);
    const double fixed = band[j + m] - band[j];
    if (maximize) {
      return mass_at(below, node(j)) + fixed + mass_at(above, node(n));
    }
    return mass_at(below, node(0)) + fixed + mass_at(above, node(j + m));
  };

  double a = 0.0;
  double b = 1.0;
  switch (spec.kind) {
    case SpecKind::full:
      return band[n];
    case SpecKind::mean:
      throw std::invalid_argument(
          "extremal_mean needs a T- or U-independence spec");
    case SpecKind::t_set:
      if (spec.is_interval) {
        a = spec.a;
        b = spec.b;
      } else if (spec.points.size() == 1) {
        a = b = spec.points.front();
      } else {
        throw std::invalid_argument(
            "extremal_mean needs T to be an interval or a single point");
      }
      {
        const std::size_t ja = snap(a, n);
        const std::size_t m = snap(b, n) - ja;
        return value(ja, m, static_cast<double>(ja) / dn);
      }
    case SpecKind::u_set:
      a = spec.a;
      b = spec.b;
      break;
  }
  // U: the band's start s_a in arm-0 ranks is free; the mass below it is
  // (a - p0 s_a) / p1, which must be a valid share.
  const std::size_t m = snap(b, n) - snap(a, n);
  const double width = static_cast<double>(m) / dn;
  const double a_snap = static_cast<double>(snap(a, n)) / dn;
  double best = maximize ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t j = 0; j + m <= n; ++j) {
    const double s_a = static_cast<double>(j) / dn;
    const double below = (a_snap - obs.p0() * s_a) / obs.p1;
    if (below < -kBudgetSlack || below > 1.0 - width + kBudgetSlack) continue;
    const double v = value(j, m, std::clamp(below, 0.0, 1.0 - width));
    best = maximize ? std::max(best, v) : std::min(best, v);
    any = true;
  }
  if (!any) throw InfeasibleProgramError("no feasible band position");
  return best;
}

}  // namespace qindep

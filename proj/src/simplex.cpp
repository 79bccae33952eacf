#include "qindep/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "qindep/errors.hpp"

namespace qindep {
namespace {

using Matrix = std::vector<std::vector<double>>;

// min c.x  s.t.  A x = b, x >= 0, with the tableau kept dense.
class Tableau {
 public:
  Tableau(const Matrix& a, const std::vector<double>& b, double tol,
          std::size_t max_iter)
      : m_(a.size()), n_(a.empty() ? 0 : a.front().size()), n_art_(m_),
        tol_(tol), max_iter_(max_iter) {
    // Columns: n structural, then one artificial per row, then the rhs.
    const std::size_t width = n_ + m_ + 1;
    t_.assign(m_, std::vector<double>(width, 0.0));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign * a[i][j];
      t_[i][n_ + i] = 1.0;
      t_[i][width - 1] = sign * b[i];
      basis_[i] = n_ + i;
    }
  }

  std::vector<double> solve(const std::vector<double>& cost) {
    phase_one();
    phase_two(cost);
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = t_[i].back();
    }
    return x;
  }

 private:
  // Dropping redundant rows shrinks m_ but keeps the column layout.
  std::size_t rhs_col() const { return n_ + n_art_; }
  bool is_artificial(std::size_t j) const {
    return j >= n_ && j < n_ + n_art_;
  }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / t_[r][c];
    for (double& v : t_[r]) v *= inv;
    t_[r][c] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_[i][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= rhs_col(); ++j) t_[i][j] -= f * t_[r][j];
      t_[i][c] = 0.0;
    }
    const double f = obj_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= rhs_col(); ++j) obj_[j] -= f * t_[r][j];
      obj_[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Bland's rule iterations on the current objective row.
  void iterate(bool allow_artificial) {
    for (std::size_t it = 0;; ++it) {
      if (it >= max_iter_) {
        throw std::runtime_error("simplex: iteration limit reached");
      }
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < rhs_col(); ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (obj_[j] < -tol_) {
          enter = j;
          break;
        }
      }
      if (!enter) return;
      std::optional<std::size_t> leave;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double coef = t_[i][*enter];
        if (coef <= tol_) continue;
        const double ratio = t_[i].back() / coef;
        if (!leave || ratio < best - tol_ ||
            (std::abs(ratio - best) <= tol_ && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) throw std::runtime_error("simplex: unbounded objective");
      pivot(*leave, *enter);
    }
  }

  void phase_one() {
    obj_.assign(rhs_col() + 1, 0.0);
    double scale = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) obj_[j] -= t_[i][j];
      obj_.back() -= t_[i].back();
      scale = std::max(scale, std::abs(t_[i].back()));
    }
    iterate(true);
    const double infeasibility = -obj_.back();
    if (infeasibility > 1e-9 * scale) {
      throw InfeasibleProgramError("linear program is infeasible (residual " +
                                   std::to_string(infeasibility) + ")");
    }
    // Drive remaining artificials out of the basis; rows where that is
    // impossible are linear combinations of the others.
    std::vector<std::size_t> redundant;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(t_[i][j]) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col) {
        pivot(i, *col);
      } else {
        redundant.push_back(i);
      }
    }
    for (auto it = redundant.rbegin(); it != redundant.rend(); ++it) {
      t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(*it));
      basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    m_ = t_.size();
  }

  void phase_two(const std::vector<double>& cost) {
    obj_.assign(rhs_col() + 1, 0.0);
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t bj = basis_[i];
      const double cb = bj < n_ ? cost[bj] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= rhs_col(); ++j) obj_[j] -= cb * t_[i][j];
    }
    iterate(false);
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t n_art_;
  double tol_;
  std::size_t max_iter_;
  Matrix t_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
};

struct Normalized {
  std::vector<double> cost;
  std::vector<double> upper;
  std::vector<LinearProgram::Row> rows;
};

Normalized normalize(const LinearProgram& lp) {
  const std::size_t n = lp.n_vars;
  if (n == 0) throw std::invalid_argument("solve_lp: no variables");
  if (lp.cost.size() != n) {
    throw std::invalid_argument("solve_lp: cost has the wrong length");
  }
  Normalized out;
  out.cost = lp.cost;
  out.upper = lp.upper.empty() ? std::vector<double>(n, 1.0) : lp.upper;
  if (out.upper.size() != n) {
    throw std::invalid_argument("solve_lp: upper has the wrong length");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(out.cost[j]) || !(out.upper[j] >= 0.0)) {
      throw std::invalid_argument("solve_lp: bad cost or bound at variable " +
                                  std::to_string(j));
    }
  }
  for (const auto& row : lp.rows) {
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("solve_lp: non-finite right-hand side");
    }
    std::map<std::size_t, double> merged;
    for (const auto& [j, v] : row.terms) {
      if (j >= n || !std::isfinite(v)) {
        throw std::invalid_argument("solve_lp: bad row term");
      }
      merged[j] += v;
    }
    LinearProgram::Row r;
    r.rhs = row.rhs;
    for (const auto& [j, v] : merged) {
      if (v != 0.0) r.terms.emplace_back(j, v);
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

struct Presolved {
  std::vector<std::optional<double>> fixed;
  std::vector<std::size_t> live_rows;
  std::vector<double> rhs;  // adjusted, indexed by original row
  std::vector<std::vector<std::size_t>> groups;
};

void check_feasible_value(double x, double upper, std::size_t j) {
  const double slack = 1e-9 * std::max(1.0, std::isfinite(upper) ? upper : 1.0);
  if (x < -slack || x > upper + slack) {
    throw InfeasibleProgramError("linear program is infeasible: variable " +
                                 std::to_string(j) + " forced to " +
                                 std::to_string(x));
  }
}

Presolved presolve(const Normalized& p, bool enabled) {
  const std::size_t n = p.cost.size();
  const std::size_t m = p.rows.size();
  Presolved out;
  out.fixed.assign(n, std::nullopt);
  out.rhs.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.rhs[i] = p.rows[i].rhs;
  std::vector<bool> alive(m, true);

  if (enabled) {
    std::vector<std::vector<std::pair<std::size_t, double>>> cols(n);
    std::vector<std::size_t> count(m);
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [j, v] : p.rows[i].terms) cols[j].emplace_back(i, v);
      count[i] = p.rows[i].terms.size();
      if (count[i] <= 1) queue.push_back(i);
    }
    while (!queue.empty()) {
      const std::size_t i = queue.back();
      queue.pop_back();
      if (!alive[i]) continue;
      if (count[i] == 0) {
        double scale = 1.0;
        for (const auto& [j, v] : p.rows[i].terms) {
          scale = std::max(scale, std::abs(v));
        }
        if (std::abs(out.rhs[i]) > 1e-9 * scale) {
          throw InfeasibleProgramError(
              "linear program is infeasible: empty row " + std::to_string(i) +
              " has right-hand side " + std::to_string(out.rhs[i]));
        }
        alive[i] = false;
        continue;
      }
      if (count[i] != 1) continue;
      std::size_t var = n;
      double coef = 0.0;
      for (const auto& [j, v] : p.rows[i].terms) {
        if (!out.fixed[j]) {
          var = j;
          coef = v;
          break;
        }
      }
      double x = out.rhs[i] / coef;
      check_feasible_value(x, p.upper[var], var);
      x = std::clamp(x, 0.0, p.upper[var]);
      out.fixed[var] = x;
      alive[i] = false;
      for (const auto& [r, v] : cols[var]) {
        out.rhs[r] -= v * x;
        if (--count[r] <= 1 && alive[r]) queue.push_back(r);
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (alive[i]) out.live_rows.push_back(i);
  }

  if (!enabled) {
    for (std::size_t j = 0; j < n; ++j) out.groups.push_back({j});
    return out;
  }
  // Columns with identical cost and identical live coefficients are
  // interchangeable and merge into one variable with the summed bound.
  std::vector<std::vector<double>> signature(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!out.fixed[j]) signature[j].push_back(p.cost[j]);
  }
  for (std::size_t i : out.live_rows) {
    for (const auto& [j, v] : p.rows[i].terms) {
      if (out.fixed[j]) continue;
      signature[j].push_back(static_cast<double>(i));
      signature[j].push_back(v);
    }
  }
  std::map<std::vector<double>, std::size_t> group_of;
  for (std::size_t j = 0; j < n; ++j) {
    if (out.fixed[j]) continue;
    auto [it, inserted] = group_of.emplace(signature[j], out.groups.size());
    if (inserted) out.groups.emplace_back();
    out.groups[it->second].push_back(j);
  }
  return out;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  const Normalized p = normalize(lp);
  const Presolved pre = presolve(p, opts.presolve);
  const std::size_t n = p.cost.size();
  const std::size_t g = pre.groups.size();

  std::vector<double> cost(g);
  std::vector<double> upper(g, 0.0);
  std::vector<std::size_t> group_index(n, g);
  for (std::size_t k = 0; k < g; ++k) {
    cost[k] = p.cost[pre.groups[k].front()];
    for (std::size_t j : pre.groups[k]) {
      upper[k] += p.upper[j];
      group_index[j] = k;
    }
  }

  // Equality rows plus x_k + s_k = u_k for every finite bound.
  std::vector<std::size_t> bounded;
  for (std::size_t k = 0; k < g; ++k) {
    if (std::isfinite(upper[k])) bounded.push_back(k);
  }
  const std::size_t cols = g + bounded.size();
  Matrix a;
  std::vector<double> b;
  for (std::size_t i : pre.live_rows) {
    std::vector<double> row(cols, 0.0);
    for (const auto& [j, v] : p.rows[i].terms) {
      if (!pre.fixed[j]) row[group_index[j]] = v;
    }
    a.push_back(std::move(row));
    b.push_back(pre.rhs[i]);
  }
  for (std::size_t s = 0; s < bounded.size(); ++s) {
    std::vector<double> row(cols, 0.0);
    row[bounded[s]] = 1.0;
    row[g + s] = 1.0;
    a.push_back(std::move(row));
    b.push_back(upper[bounded[s]]);
  }
  std::vector<double> full_cost(cols, 0.0);
  std::copy(cost.begin(), cost.end(), full_cost.begin());

  std::vector<double> y(cols, 0.0);
  if (cols > 0 && !a.empty()) {
    for (auto& row : a) row.resize(cols, 0.0);
    Tableau t(a, b, opts.tolerance, opts.max_iterations);
    y = t.solve(full_cost);
  } else if (cols > 0) {
    // Unconstrained box: each variable sits at whichever bound is cheaper.
    for (std::size_t k = 0; k < g; ++k) {
      if (cost[k] < 0.0) {
        if (!std::isfinite(upper[k])) {
          throw std::runtime_error("simplex: unbounded objective");
        }
        y[k] = upper[k];
      }
    }
  }

  LpSolution sol;
  sol.reduced_vars = cols;
  sol.reduced_rows = a.size();
  sol.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (pre.fixed[j]) sol.x[j] = *pre.fixed[j];
  }
  for (std::size_t k = 0; k < g; ++k) {
    double remaining = std::max(0.0, y[k]);
    for (std::size_t j : pre.groups[k]) {
      const double take = std::min(remaining, p.upper[j]);
      sol.x[j] = take;
      remaining -= take;
    }
  }
  for (std::size_t j = 0; j < n; ++j) sol.objective += p.cost[j] * sol.x[j];
  return sol;
}

}  // namespace qindep

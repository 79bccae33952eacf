#ifndef QINDEP_SIMPLEX_HPP
#define QINDEP_SIMPLEX_HPP

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace qindep {

// minimize cost . x  subject to  rows (equalities),  0 <= x <= upper.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<std::size_t, double>> terms;
    double rhs = 0.0;
  };

  std::size_t n_vars = 0;
  std::vector<double> cost;
  // Empty means 1 for every variable; entries may be +infinity.
  std::vector<double> upper;
  std::vector<Row> rows;
};

struct LpSolution {
  double objective = 0.0;
  std::vector<double> x;
  // Size of the dense problem that reached the simplex after presolve.
  std::size_t reduced_vars = 0;
  std::size_t reduced_rows = 0;
};

struct SimplexOptions {
  // Eliminate singleton rows and merge identical columns first.
  bool presolve = true;
  double tolerance = 1e-10;
  std::size_t max_iterations = 1000000;
};

// Dense two-phase tableau simplex with Bland's rule. Redundant equality rows
// are detected and dropped. Throws InfeasibleProgramError when no feasible
// point exists, std::runtime_error when unbounded or out of iterations, and
// std::invalid_argument on malformed input.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace qindep

#endif  // QINDEP_SIMPLEX_HPP

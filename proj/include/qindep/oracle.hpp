#ifndef QINDEP_ORACLE_HPP
#define QINDEP_ORACLE_HPP

#include <cstddef>
#include <vector>

#include "qindep/independence_spec.hpp"
#include "qindep/observables.hpp"
#include "qindep/propensity.hpp"

namespace qindep {

enum class Direction { min, max };

// The average of p over cells [first, last) equals `average`.
struct AverageConstraint {
  std::size_t first = 0;
  std::size_t last = 0;
  double average = 0.0;
};

// Extremize F_{U|X}(k/N | x) = (1/(p_x N)) * sum_{i < k} p_i over
// propensities p in [0, 1]^N satisfying every average constraint. Here p is
// P(X = x | U) for the arm with probability p_x.
struct FeasibleProgram {
  std::size_t n_cells = 0;
  std::size_t objective_cell = 0;  // k: the objective covers cells [0, k)
  Direction direction = Direction::max;
  double p_x = 0.5;
  std::vector<AverageConstraint> constraints;
};

// Average-value constraints implied by spec on a grid of n cells, including
// mean(p) = p_x. Interval endpoints and T points snap to the nearest cell
// boundary. Throws std::invalid_argument for mean independence.
std::vector<AverageConstraint> spec_constraints(const IndependenceSpec& spec,
                                                double p_x, std::size_t n);

FeasibleProgram make_program(const IndependenceSpec& spec, double p_x,
                             std::size_t n, std::size_t objective_cell,
                             Direction direction);

enum class Solver { greedy, simplex };

struct OracleSolution {
  double value = 0.0;
  GridPropensity argopt;
};

// The greedy path needs the constraints other than the full-range one to be
// pairwise disjoint (std::invalid_argument otherwise); the simplex path takes
// any program. Throws InfeasibleProgramError when nothing is feasible.
OracleSolution solve_extremal_cdf(const FeasibleProgram& program,
                                  Solver solver = Solver::greedy);

struct VerifyReport {
  IndependenceSpec spec;
  double p_x = 0.5;
  std::size_t n_cells = 0;
  double max_discrepancy = 0.0;
  double worst_u = 0.0;
  // Largest |greedy - simplex| over the sweep; zero when simplex is skipped.
  double solver_gap = 0.0;
  bool pass = false;
};

// Compares oracle extrema at every u = k/N, k = 0..N, with the closed-form cdf
// envelopes for a uniform F_U. Passes when the discrepancy is at most 3/N.
// Throws std::invalid_argument when n_cells < 100.
VerifyReport verify_bounds(const IndependenceSpec& spec, double p_x,
                           std::size_t n_cells, bool cross_check_simplex = true);

// Extremizes E(Y0 | X = 1) over the T- or U-interval model discretized on N
// cells of the arm-0 rank scale. Requires a bounded declared support of
// Y given X = 0; returns an infinite value otherwise.
double extremal_mean(const IndependenceSpec& spec, const ObservedJoint& obs,
                     Direction direction, std::size_t n_cells);

}  // namespace qindep

#endif  // QINDEP_ORACLE_HPP

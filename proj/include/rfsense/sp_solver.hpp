#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rfsense/gp_solver.hpp"

namespace rfsense {

/// numerator(x) / denominator(x) <= 1, both posynomials.
struct RatioConstraint {
  Posynomial numerator;
  Posynomial denominator;
  std::string label;
};

struct SpProblem {
  Posynomial objective;
  std::vector<RatioConstraint> constraints;
  BoundsMap bounds;
};

enum class Termination { Converged, MaxIterations, Infeasible, RankDeficient, NumericalFailure };

std::string_view to_string(Termination t);

/// Per-iteration record of a successive-condensation run. Entry 0 is the
/// start point; entry q >= 1 is the solution of the q-th condensed GP.
/// `weights[q][c]` are the condensation weights used for constraint c when
/// building the q-th GP.
struct SolveTrace {
  std::vector<double> objectives;
  std::vector<Assignment> assignments;
  std::vector<std::vector<std::vector<double>>> weights;
  Termination termination = Termination::Converged;

  int outer_iterations() const { return static_cast<int>(objectives.size()) - 1; }
};

struct SpOptions {
  double rel_tol = 1e-6;
  int max_outer_iters = 50;
  /// Tolerance on the true constraints when accepting a start point.
  double start_slack = 1e-9;
  /// After each accepted GP step, try continuing it in log space with step
  /// lengths 2, 4, ... (up to 2^n); 0 gives plain successive condensation.
  int extrapolation_doublings = 6;
  GpOptions gp;
};

struct SpResult {
  Assignment point;
  SolveTrace trace;
};

/// Largest numerator/denominator ratio over all constraints at `x`.
double max_constraint_ratio(const SpProblem& problem, const Assignment& x);

/// Successive condensation: at the current point each denominator is replaced
/// by its condensed monomial, the resulting GP is solved, and the process
/// repeats from the new point until the relative objective change drops below
/// `rel_tol` or the iteration cap is hit. Throws StartInfeasible when `start`
/// violates the true constraints.
SpResult solve_sp(const SpProblem& problem, const Assignment& start, const SpOptions& options = {});

}  // namespace rfsense

#pragma once

#include <map>
#include <vector>

#include "rfsense/posynomial.hpp"

namespace rfsense {

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

using BoundsMap = std::map<VarId, Bounds>;

/// minimize objective(x) subject to constraint_i(x) <= 1 and the box bounds.
struct GpProblem {
  Posynomial objective;
  std::vector<Posynomial> constraints;
  BoundsMap bounds;
};

struct GpOptions {
  /// Barrier iterations stop once (number of inequalities) / t drops below
  /// this; the objective is then within this relative margin of optimal.
  double gap_tolerance = 1e-9;
  /// Centering stops when half the squared Newton decrement is below this.
  double newton_tolerance = 1e-10;
  int max_newton_iters = 100;
  double barrier_growth = 10.0;
  double initial_barrier = 1.0;
  int max_halvings = 40;
  /// Box applied to variables that appear without explicit bounds.
  double default_lower = 1e-20;
  double default_upper = 1e20;
};

struct GpSolution {
  Assignment point;
  double objective = 0.0;
  int newton_steps = 0;
};

/// Solves the GP in log variables with a phase-I / phase-II barrier method
/// and damped Newton centering. Throws Infeasible when phase I cannot find a
/// strictly feasible point and NumericalFailure when Newton stagnates.
GpSolution solve_gp(const GpProblem& problem, const GpOptions& options = {});

}  // namespace rfsense

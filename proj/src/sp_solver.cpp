#include "rfsense/sp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rfsense/error.hpp"

namespace rfsense {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxIterations: return "MaxIterations";
    case Termination::Infeasible: return "Infeasible";
    case Termination::RankDeficient: return "RankDeficient";
    case Termination::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

double max_constraint_ratio(const SpProblem& problem, const Assignment& x) {
  double worst = 0.0;
  for (const RatioConstraint& c : problem.constraints) {
    if (c.numerator.empty()) continue;
    worst = std::max(worst, evaluate(c.numerator, x) / evaluate(c.denominator, x));
  }
  return worst;
}

namespace {

// Continues the step from -> to along the same log-space direction with
// doubling step lengths, keeping each candidate only while it satisfies the
// true constraints and lowers the objective.
void extrapolate(const SpProblem& problem, const Assignment& from, Assignment& to, double& objective,
                 int doublings) {
  double step = 1.0;
  for (int d = 0; d < doublings; ++d) {
    step *= 2.0;
    Assignment candidate = to;
    for (auto& [var, value] : candidate) {
      const auto origin = from.find(var);
      if (origin == from.end()) continue;
      double y = std::log(origin->second) + step * (std::log(value) - std::log(origin->second));
      const auto b = problem.bounds.find(var);
      if (b != problem.bounds.end()) y = std::clamp(y, std::log(b->second.lower), std::log(b->second.upper));
      value = std::exp(y);
    }
    if (max_constraint_ratio(problem, candidate) > 1.0) return;
    const double value = evaluate(problem.objective, candidate);
    if (!(value < objective)) return;
    to = std::move(candidate);
    objective = value;
  }
}

}  // namespace

SpResult solve_sp(const SpProblem& problem, const Assignment& start, const SpOptions& options) {
  for (const RatioConstraint& c : problem.constraints) {
    if (c.denominator.empty()) {
      throw std::invalid_argument("solve_sp: constraint '" + c.label + "' has an empty denominator");
    }
  }
  const double start_ratio = max_constraint_ratio(problem, start);
  if (start_ratio > 1.0 + options.start_slack) {
    std::ostringstream msg;
    msg << "start point violates the constraints (max ratio " << start_ratio << ")";
    throw StartInfeasible(msg.str());
  }

  SpResult result;
  SolveTrace& trace = result.trace;
  Assignment current = start;
  double objective = evaluate(problem.objective, current);
  trace.objectives.push_back(objective);
  trace.assignments.push_back(current);
  trace.weights.emplace_back();
  trace.termination = Termination::MaxIterations;

  for (int q = 1; q <= options.max_outer_iters; ++q) {
    GpProblem gp;
    gp.objective = problem.objective;
    gp.bounds = problem.bounds;
    std::vector<std::vector<double>> weights;
    for (const RatioConstraint& c : problem.constraints) {
      Condensation cond = condense(c.denominator, current);
      gp.constraints.push_back(c.numerator * cond.bound.inverse());
      weights.push_back(std::move(cond.weights));
    }

    GpSolution next;
    try {
      next = solve_gp(gp, options.gp);
    } catch (const Infeasible&) {
      // The current point is feasible for this GP, so this only happens when
      // it sits on a boundary with empty interior; stop where we are.
      trace.termination = Termination::Infeasible;
      break;
    }

    // Never accept a worse point than the expansion point, which is itself
    // feasible for the condensed problem.
    const bool improved = next.objective <= objective;
    const double previous = objective;
    if (improved) {
      Assignment from = std::move(current);
      current = std::move(next.point);
      objective = next.objective;
      extrapolate(problem, from, current, objective, options.extrapolation_doublings);
    }
    trace.objectives.push_back(objective);
    trace.assignments.push_back(current);
    trace.weights.push_back(std::move(weights));

    if (!improved || std::abs(previous - objective) <= options.rel_tol * std::abs(previous)) {
      trace.termination = Termination::Converged;
      break;
    }
  }

  result.point = std::move(current);
  return result;
}

}  // namespace rfsense

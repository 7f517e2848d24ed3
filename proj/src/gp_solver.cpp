#include "rfsense/gp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "rfsense/error.hpp"

namespace rfsense {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Value, gradient and Hessian of log(sum exp(A y + b)).
struct LseEval {
  double value;
  Vector grad;
  Matrix hess;
};

class LseFunction {
 public:
  explicit LseFunction(LogSumExpForm form)
      : form_(std::move(form)), weights_(form_.terms), grad_(form_.vars) {}

  double value(const Vector& y) const {
    return form_.value({y.data(), static_cast<std::size_t>(form_.vars)}, weights_);
  }

  LseEval evaluate(const Vector& y) const {
    LseEval out;
    out.value = form_.value_and_gradient({y.data(), static_cast<std::size_t>(form_.vars)},
                                         weights_, grad_);
    out.grad = Eigen::Map<const Vector>(grad_.data(), form_.vars);
    const RowMajorMap a(form_.exponents.data(), form_.terms, form_.vars);
    const Eigen::Map<const Vector> w(weights_.data(), form_.terms);
    out.hess = a.transpose() * w.asDiagonal() * a - out.grad * out.grad.transpose();
    return out;
  }

 private:
  LogSumExpForm form_;
  mutable std::vector<double> weights_;
  mutable std::vector<double> grad_;
};

// Barrier problem over z = (y) in phase II or z = (y, s) in phase I:
//   phase II: t f0(y) - sum log(-f_i(y)) - box
//   phase I : t s     - sum log(s - f_i(y)) - log(s + 1) - box
class BarrierProgram {
 public:
  BarrierProgram(const LseFunction* objective, const std::vector<LseFunction>& constraints,
                 Vector lo, Vector hi)
      : objective_(objective), constraints_(constraints), lo_(std::move(lo)), hi_(std::move(hi)) {}

  bool phase_one() const { return objective_ == nullptr; }
  int primal_size() const { return static_cast<int>(lo_.size()); }
  int size() const { return primal_size() + (phase_one() ? 1 : 0); }
  int inequality_count() const {
    return static_cast<int>(constraints_.size()) + 2 * primal_size() + (phase_one() ? 1 : 0);
  }

  double slack(const Vector& z) const { return phase_one() ? z(primal_size()) : 0.0; }

  double max_constraint(const Vector& z) const {
    const Vector y = z.head(primal_size());
    double worst = -kInf;
    for (const LseFunction& c : constraints_) worst = std::max(worst, c.value(y));
    return worst;
  }

  // +inf outside the barrier domain.
  double value(double t, const Vector& z) const {
    const int n = primal_size();
    const Vector y = z.head(n);
    double f = 0.0;
    for (int v = 0; v < n; ++v) {
      const double a = y(v) - lo_(v);
      const double b = hi_(v) - y(v);
      if (!(a > 0.0) || !(b > 0.0)) return kInf;
      f -= std::log(a) + std::log(b);
    }
    const double s = slack(z);
    if (phase_one()) {
      if (!(s + 1.0 > 0.0)) return kInf;
      f += t * s - std::log(s + 1.0);
    } else {
      f += t * objective_->value(y);
    }
    for (const LseFunction& c : constraints_) {
      const double d = s - c.value(y);
      if (!(d > 0.0)) return kInf;
      f -= std::log(d);
    }
    return std::isfinite(f) ? f : kInf;
  }

  void derivatives(double t, const Vector& z, Vector& grad, Matrix& hess) const {
    const int n = primal_size();
    const int m = size();
    const Vector y = z.head(n);
    grad = Vector::Zero(m);
    hess = Matrix::Zero(m, m);

    for (int v = 0; v < n; ++v) {
      const double a = y(v) - lo_(v);
      const double b = hi_(v) - y(v);
      grad(v) += -1.0 / a + 1.0 / b;
      hess(v, v) += 1.0 / (a * a) + 1.0 / (b * b);
    }

    const double s = slack(z);
    if (phase_one()) {
      grad(n) += t - 1.0 / (s + 1.0);
      hess(n, n) += 1.0 / ((s + 1.0) * (s + 1.0));
    } else {
      const LseEval f0 = objective_->evaluate(y);
      grad.head(n) += t * f0.grad;
      hess.topLeftCorner(n, n) += t * f0.hess;
    }

    Vector dir(m);
    for (const LseFunction& c : constraints_) {
      const LseEval fi = c.evaluate(y);
      const double d = s - fi.value;
      dir.head(n) = fi.grad;
      if (phase_one()) dir(n) = -1.0;
      grad += dir / d;
      hess.topLeftCorner(n, n) += fi.hess / d;
      hess += (dir * dir.transpose()) / (d * d);
    }
  }

 private:
  const LseFunction* objective_;
  const std::vector<LseFunction>& constraints_;
  Vector lo_;
  Vector hi_;
};

struct CenteringStats {
  int steps = 0;
};

// Damped Newton minimization of the barrier function at fixed t. `stop` is
// polled after every accepted step and can end the centering early.
template <typename Stop>
void center(const BarrierProgram& program, double t, Vector& z, const GpOptions& options,
            CenteringStats& stats, Stop&& stop) {
  constexpr double kArmijo = 0.01;
  constexpr double kLooseDecrement = 1e-6;
  Vector grad;
  Matrix hess;
  for (int iter = 0;; ++iter) {
    program.derivatives(t, z, grad, hess);
    Eigen::LDLT<Matrix> ldlt(hess);
    Vector step = ldlt.solve(-grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      const double shift = 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
      step = (hess + shift * Matrix::Identity(hess.rows(), hess.cols())).ldlt().solve(-grad);
    }
    const double slope = grad.dot(step);
    const double decrement = -slope / 2.0;
    if (decrement <= options.newton_tolerance) return;
    const double f = program.value(t, z);
    // Below this the barrier value cannot resolve further progress.
    const double loose = std::max(kLooseDecrement, 1e-12 * std::abs(f));
    if (iter >= options.max_newton_iters) {
      if (decrement <= loose) return;
      std::ostringstream msg;
      msg << "Newton centering did not converge in " << options.max_newton_iters
          << " iterations (t = " << t << ", decrement = " << decrement << ")";
      throw NumericalFailure(msg.str());
    }

    double alpha = 1.0;
    int halvings = 0;
    while (true) {
      const double trial = program.value(t, z + alpha * step);
      if (trial <= f + kArmijo * alpha * slope) break;
      alpha *= 0.5;
      if (++halvings > options.max_halvings) {
        if (decrement <= loose) return;
        std::ostringstream msg;
        msg << "line search failed after " << options.max_halvings
            << " halvings (t = " << t << ", decrement = " << decrement << ")";
        throw NumericalFailure(msg.str());
      }
    }
    z += alpha * step;
    ++stats.steps;
    if (stop(z)) return;
  }
}

}  // namespace

GpSolution solve_gp(const GpProblem& problem, const GpOptions& options) {
  if (problem.objective.empty()) throw std::invalid_argument("solve_gp: empty objective");

  std::set<VarId> vars = variables(problem.objective);
  for (const Posynomial& c : problem.constraints) {
    const auto cv = variables(c);
    vars.insert(cv.begin(), cv.end());
  }
  for (const auto& [v, b] : problem.bounds) {
    if (!(b.lower > 0.0) || !(b.upper > b.lower)) {
      throw std::invalid_argument("solve_gp: bounds of " + to_string(v) + " must satisfy 0 < lo < hi");
    }
    vars.insert(v);
  }

  const VariableIndex index(std::vector<VarId>(vars.begin(), vars.end()));
  const int n = index.size();
  Vector lo(n);
  Vector hi(n);
  for (int i = 0; i < n; ++i) {
    const auto it = problem.bounds.find(index.vars()[i]);
    const Bounds b = it != problem.bounds.end()
                         ? it->second
                         : Bounds{options.default_lower, options.default_upper};
    lo(i) = std::log(b.lower);
    hi(i) = std::log(b.upper);
  }

  const LseFunction objective(compile(problem.objective, index));
  std::vector<LseFunction> constraints;
  for (const Posynomial& c : problem.constraints) {
    if (c.empty()) continue;  // 0 <= 1 always holds
    constraints.emplace_back(compile(c, index));
  }

  GpSolution out;
  auto finish = [&](const Vector& y) {
    for (int i = 0; i < n; ++i) out.point[index.vars()[i]] = std::exp(y(i));
    out.objective = evaluate(problem.objective, out.point);
    return out;
  };

  Vector y = (lo + hi) / 2.0;
  CenteringStats stats;

  // Phase I: drive the largest constraint value below zero.
  {
    const BarrierProgram phase1(nullptr, constraints, lo, hi);
    if (!constraints.empty() && phase1.max_constraint(y) >= 0.0) {
      Vector z(n + 1);
      z.head(n) = y;
      z(n) = std::max(phase1.max_constraint(y), -0.5) + 1.0;
      const int m = phase1.inequality_count();
      bool found = false;
      auto feasible = [&](const Vector& zz) { return phase1.max_constraint(zz) < 0.0; };
      for (double t = options.initial_barrier;; t *= options.barrier_growth) {
        center(phase1, t, z, options, stats, feasible);
        if (feasible(z)) {
          found = true;
          break;
        }
        const double gap = m / t;
        if (z(n) - gap > 0.0 || gap < options.gap_tolerance) break;
      }
      if (!found) {
        std::ostringstream msg;
        msg << "no strictly feasible point (phase-I slack " << z(n) << ")";
        throw Infeasible(msg.str());
      }
      y = z.head(n);
    }
  }

  // Phase II.
  if (n > 0) {
    const BarrierProgram phase2(&objective, constraints, lo, hi);
    const int m = phase2.inequality_count();
    auto never = [](const Vector&) { return false; };
    for (double t = options.initial_barrier;; t *= options.barrier_growth) {
      center(phase2, t, y, options, stats, never);
      if (m / t < options.gap_tolerance) break;
    }
  } else {
    for (const LseFunction& c : constraints) {
      if (c.value(y) > 0.0) throw Infeasible("constant constraint exceeds 1");
    }
  }

  out.newton_steps = stats.steps;
  return finish(y);
}

}  // namespace rfsense

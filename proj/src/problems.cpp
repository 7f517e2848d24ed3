#include "rfsense/problems.hpp"

#include <algorithm>
#include <cmath>

#include "rfsense/beamforming.hpp"
#include "rfsense/error.hpp"
#include "rfsense/sinr_model.hpp"

namespace rfsense {
namespace {

Posynomial sum_of_powers(int targets) {
  std::vector<Monomial> terms;
  for (int j = 0; j < targets; ++j) terms.push_back(Monomial::variable(tx_power(j)));
  return Posynomial(std::move(terms));
}

RatioConstraint sum_power_cap(const Scene& scene) {
  return {sum_of_powers(scene.target_count()) * (1.0 / scene.p_max), Posynomial(Monomial()),
          "sum-power"};
}

void add_power_bounds(const Scene& scene, BoundsMap& bounds) {
  for (int j = 0; j < scene.target_count(); ++j) {
    bounds[tx_power(j)] = {kVariableFloor, scene.p_max};
  }
}

std::string target_label(int j) { return "sinr-target-" + std::to_string(j + 1); }

}  // namespace

SpProblem build_joint_mrc_problem(const Scene& scene, const ChannelSet& channels) {
  const int targets = scene.target_count();
  const int sensors = scene.sensors.sensor_count;
  const Eigen::MatrixXd coeffs = mrt_incident_coefficients(scene);

  SpProblem problem;
  std::vector<Monomial> objective;
  for (int j = 0; j < targets; ++j) objective.push_back(Monomial::variable(tx_power(j)));
  for (int k = 0; k < sensors; ++k) objective.push_back(Monomial::variable(amplification(k)));
  problem.objective = Posynomial(std::move(objective));

  for (int j = 0; j < targets; ++j) {
    const MrcSinrModel model = build_mrc_sinr_signomial(j, scene, channels, coeffs);
    problem.constraints.push_back({model.numerator(), model.denominator(), target_label(j)});
  }
  problem.constraints.push_back(sum_power_cap(scene));

  add_power_bounds(scene, problem.bounds);
  for (int k = 0; k < sensors; ++k) {
    problem.bounds[amplification(k)] = {kVariableFloor, scene.sensors.alpha_max};
  }
  return problem;
}

SpProblem build_txonly_problem(const Scene& scene, const ChannelSet& channels,
                               CombinerScheme combiner) {
  const int targets = scene.target_count();
  const int sensors = scene.sensors.sensor_count;
  const std::vector<double> alphas(sensors, scene.sensors.alpha_max);
  const EquivalentChannels eq =
      equivalent_channels(channels, alphas, scene.sensors.sensor_noise_var);
  const Combiner v =
      combiner == CombinerScheme::Zf ? zf_combiner(eq, targets) : mrc_combiner(eq, targets);
  const Eigen::MatrixXd coeffs = mrt_incident_coefficients(scene);

  SpProblem problem;
  problem.objective = sum_of_powers(targets) + Posynomial(Monomial(sensors * scene.sensors.alpha_max));

  // With the combiner fixed, SINR_j = S_j delta_j / (sum_{i != j} I_ji delta_i + noise_j),
  // where delta = C p is linear in p with nonnegative coefficients.
  const std::vector<double> unit_delta(scene.object_count(), 1.0);
  std::vector<double> q;
  for (const SceneObject& o : scene.objects) q.push_back(o.response_power);
  for (int j = 0; j < targets; ++j) {
    const CVector& vj = v.columns.col(j);
    const double psi = scene.sinr_demands.at(j);
    std::vector<Monomial> numerator;
    std::vector<Monomial> denominator;

    const SinrTerms noise = sinr_terms(j, v, eq, unit_delta, q, scene.fusion.fc_noise_var);
    numerator.emplace_back(psi * (noise.sensor_noise + noise.fc_noise));

    for (int i = 0; i < scene.object_count(); ++i) {
      const double gain = q[i] * std::norm(vj.dot(eq.w.col(i)));
      for (int t = 0; t < targets; ++t) {
        const double c = gain * coeffs(i, t);
        if (!(c > 0.0)) continue;
        if (i == j) {
          denominator.push_back(Monomial::variable(tx_power(t), 1.0, c));
        } else if (combiner == CombinerScheme::Mrc) {
          // ZF nulls every interferer; its residual is rounding noise.
          numerator.push_back(Monomial::variable(tx_power(t), 1.0, psi * c));
        }
      }
    }
    problem.constraints.push_back(
        {Posynomial(std::move(numerator)), Posynomial(std::move(denominator)), target_label(j)});
  }
  problem.constraints.push_back(sum_power_cap(scene));
  add_power_bounds(scene, problem.bounds);
  return problem;
}

Assignment max_power_point(const Scene& scene, bool with_amplification) {
  Assignment x;
  const int targets = scene.target_count();
  for (int j = 0; j < targets; ++j) x[tx_power(j)] = scene.p_max / targets;
  if (with_amplification) {
    for (int k = 0; k < scene.sensors.sensor_count; ++k) {
      x[amplification(k)] = scene.sensors.alpha_max;
    }
  }
  return x;
}

std::optional<Assignment> find_feasible_start(const SpProblem& problem, const Scene& scene,
                                              const SpOptions& options) {
  bool with_amplification = false;
  for (const auto& entry : problem.bounds) {
    if (entry.first.kind == VarKind::Amplification) with_amplification = true;
  }
  Assignment x0 = max_power_point(scene, with_amplification);
  // Clamp into the box in case the caller tightened bounds.
  for (auto& [v, value] : x0) {
    const auto it = problem.bounds.find(v);
    if (it != problem.bounds.end()) value = std::clamp(value, it->second.lower, it->second.upper);
  }
  if (max_constraint_ratio(problem, x0) <= 1.0) return x0;

  // Phase I: maximize a common slack s with s * numerator / denominator <= 1.
  const VarId slack = auxiliary(0);
  constexpr double kSlackCap = 2.0;
  SpProblem phase1;
  phase1.objective = Posynomial(Monomial::variable(slack, -1.0));
  phase1.bounds = problem.bounds;
  for (const RatioConstraint& c : problem.constraints) {
    phase1.constraints.push_back(
        {c.numerator * Monomial::variable(slack), c.denominator, c.label});
  }
  const double ratio = max_constraint_ratio(problem, x0);
  const double s0 = 0.5 / ratio;
  phase1.bounds[slack] = {std::min(1e-12, s0 / 2.0), kSlackCap};

  Assignment start = x0;
  start[slack] = s0;
  SpOptions phase1_options = options;
  SpResult r;
  try {
    r = solve_sp(phase1, start, phase1_options);
  } catch (const Infeasible&) {
    return std::nullopt;
  }
  if (r.point.at(slack) < 1.0) return std::nullopt;
  r.point.erase(slack);
  if (max_constraint_ratio(problem, r.point) > 1.0 + options.start_slack) return std::nullopt;
  return r.point;
}

std::vector<double> powers_of(const Assignment& x, int targets) {
  std::vector<double> p;
  for (int j = 0; j < targets; ++j) p.push_back(x.at(tx_power(j)));
  return p;
}

std::vector<double> alphas_of(const Assignment& x, const Scene& scene) {
  std::vector<double> a;
  for (int k = 0; k < scene.sensors.sensor_count; ++k) {
    const auto it = x.find(amplification(k));
    a.push_back(it == x.end() ? scene.sensors.alpha_max : it->second);
  }
  return a;
}

}  // namespace rfsense

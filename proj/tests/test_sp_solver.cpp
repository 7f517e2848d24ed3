#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "rfsense/beamforming.hpp"
#include "rfsense/error.hpp"
#include "rfsense/problems.hpp"
#include "rfsense/signal_chain.hpp"
#include "rfsense/sp_solver.hpp"

using namespace rfsense;

namespace {

Scene make_scene(int targets, int clutter, int k, int r, double psi) {
  Scene s;
  s.geometry = {2, 2};
  const double az[] = {20, 45, 70};
  const double el[] = {40, 30, 85};
  for (int i = 0; i < targets + clutter; ++i) {
    s.objects.push_back({i < targets ? ObjectKind::Target : ObjectKind::Clutter, az[i], el[i], 1.0});
  }
  s.sensors = {k, 2.0, 0.5};
  s.fusion = {r, 0.5};
  s.sinr_demands.assign(targets, psi);
  return s;
}

// Single-target MRC SINR written out from the scalar model, used as the
// brute-force oracle's feasibility test.
double single_target_sinr(const Scene& s, const ChannelSet& ch, double p, const std::vector<double>& a) {
  const double delta = p * s.geometry.element_count();
  double gain = 0.0, sensor = 0.0;
  for (int k = 0; k < s.sensors.sensor_count; ++k) {
    const double beta = std::norm(ch.g(0, k)) * ch.f[k].squaredNorm();
    gain += a[k] * beta;
    sensor += a[k] * a[k] * beta * ch.f[k].squaredNorm();
  }
  return delta * s.objects[0].response_power * gain * gain /
         (s.sensors.sensor_noise_var * sensor + s.fusion.fc_noise_var * gain);
}

}  // namespace

TEST_CASE("monomial denominators reduce to a single GP") {
  const VarId x = tx_power(0);
  const VarId y = tx_power(1);
  SpProblem sp;
  sp.objective = Posynomial{Monomial::variable(x), Monomial::variable(y)};
  sp.constraints = {{Posynomial(Monomial()), Posynomial(Monomial(1.0, {{x, 1.0}, {y, 1.0}})), "xy>=1"}};
  sp.bounds[x] = {1e-3, 10.0};
  sp.bounds[y] = {1e-3, 10.0};

  GpProblem gp;
  gp.objective = sp.objective;
  gp.constraints = {Posynomial(Monomial(1.0, {{x, -1.0}, {y, -1.0}}))};
  gp.bounds = sp.bounds;
  const GpSolution direct = solve_gp(gp);

  SpOptions plain;
  plain.extrapolation_doublings = 0;
  const SpResult r = solve_sp(sp, {{x, 5.0}, {y, 5.0}}, plain);
  CHECK(r.trace.termination == Termination::Converged);
  CHECK(r.trace.outer_iterations() <= 2);
  CHECK(r.trace.objectives[1] == direct.objective);
  CHECK(r.point.at(x) == doctest::Approx(direct.point.at(x)).epsilon(1e-12));
}

TEST_CASE("infeasible starts are rejected") {
  const VarId x = tx_power(0);
  SpProblem sp;
  sp.objective = Monomial::variable(x);
  sp.constraints = {{Posynomial(Monomial()), Posynomial(Monomial::variable(x)), "x>=1"}};
  sp.bounds[x] = {1e-3, 10.0};
  CHECK_THROWS_AS(solve_sp(sp, {{x, 0.5}}), StartInfeasible);
}

TEST_CASE("joint problem structure") {
  const Scene s = make_scene(2, 1, 3, 4, 1.0);
  const ChannelSet ch = generate_channels(s, 1);
  const SpProblem sp = build_joint_mrc_problem(s, ch);
  CHECK(sp.constraints.size() == 3);
  const Assignment pt{{tx_power(0), 1.5}, {tx_power(1), 2.0}, {amplification(0), 0.1},
                      {amplification(1), 0.2}, {amplification(2), 0.3}};
  CHECK(evaluate(sp.objective, pt) == doctest::Approx(4.1));
  CHECK(sp.bounds.at(tx_power(0)).lower == kVariableFloor);
  CHECK(sp.bounds.at(tx_power(1)).upper == s.p_max);
  CHECK(sp.bounds.at(amplification(2)).upper == s.sensors.alpha_max);
  // sum-power cap: (p1 + p2) / P_max over the constant 1
  CHECK(evaluate(sp.constraints.back().numerator, pt) == doctest::Approx(3.5 / s.p_max));
}

TEST_CASE("single-target joint problem matches a 4-D grid oracle") {
  const Scene s = make_scene(1, 0, 3, 2, 5.0);
  const ChannelSet ch = generate_channels(s, 2);
  const SpProblem sp = build_joint_mrc_problem(s, ch);
  const auto start = find_feasible_start(sp, s);
  REQUIRE(start.has_value());
  const SpResult r = solve_sp(sp, *start);

  // Log grid with 30 points per axis, then two zoom passes around the best cell.
  double lo[4] = {1e-4, 1e-4, 1e-4, 1e-4};
  double hi[4] = {s.p_max, 2.0, 2.0, 2.0};
  double best = std::numeric_limits<double>::infinity();
  double arg[4] = {0, 0, 0, 0};
  const int n = 30;
  for (int pass = 0; pass < 3; ++pass) {
    double axes[4][n];
    for (int d = 0; d < 4; ++d) {
      for (int i = 0; i < n; ++i) axes[d][i] = lo[d] * std::pow(hi[d] / lo[d], i / (n - 1.0));
    }
    for (int i0 = 0; i0 < n; ++i0) {
      for (int i1 = 0; i1 < n; ++i1) {
        for (int i2 = 0; i2 < n; ++i2) {
          for (int i3 = 0; i3 < n; ++i3) {
            const std::vector<double> a{axes[1][i1], axes[2][i2], axes[3][i3]};
            const double f = axes[0][i0] + a[0] + a[1] + a[2];
            if (f >= best) continue;
            if (single_target_sinr(s, ch, axes[0][i0], a) < 5.0) continue;
            best = f;
            arg[0] = axes[0][i0];
            arg[1] = a[0];
            arg[2] = a[1];
            arg[3] = a[2];
          }
        }
      }
    }
    for (int d = 0; d < 4; ++d) {
      const double cell = std::pow(hi[d] / lo[d], 1.0 / (n - 1.0));
      const double top = d == 0 ? s.p_max : 2.0;
      lo[d] = std::max(1e-9, arg[d] / (cell * cell));
      hi[d] = std::min(top, arg[d] * cell * cell);
    }
  }
  const double sp_objective = r.trace.objectives.back();
  CHECK(sp_objective <= best * 1.01);
  CHECK(sp_objective >= best * 0.99);
  CHECK(single_target_sinr(s, ch, r.point.at(tx_power(0)), alphas_of(r.point, s)) >= 5.0 * (1 - 1e-6));
}

TEST_CASE("joint MRC on the published geometry descends and stays feasible") {
  const Scene s = make_scene(2, 1, 4, 10, 1.0);
  const ChannelSet ch = generate_channels(s, 0);
  const SpProblem sp = build_joint_mrc_problem(s, ch);
  const auto start = find_feasible_start(sp, s);
  REQUIRE(start.has_value());
  const SpResult r = solve_sp(sp, *start);
  const auto& f = r.trace.objectives;
  for (std::size_t q = 1; q < f.size(); ++q) CHECK(f[q] <= f[q - 1] * (1 + 1e-9));
  CHECK(max_constraint_ratio(sp, r.point) <= 1.0 + 1e-6);
  const auto p = powers_of(r.point, 2);
  const auto a = alphas_of(r.point, s);
  for (int j = 0; j < 2; ++j) CHECK(mrc_sinr_closed_form(j, p, a, s, ch) >= 1.0 - 1e-6);
  CHECK(r.trace.weights.size() == f.size());
  CHECK(r.trace.assignments.size() == f.size());
}

TEST_CASE("feasible start selection") {
  const Scene s = make_scene(2, 1, 4, 10, 1e-6);
  const ChannelSet ch = generate_channels(s, 0);
  SpProblem sp = build_joint_mrc_problem(s, ch);
  const auto easy = find_feasible_start(sp, s);
  REQUIRE(easy.has_value());
  CHECK(easy->at(tx_power(0)) == doctest::Approx(s.p_max / 2));
  CHECK(easy->at(amplification(3)) == doctest::Approx(s.sensors.alpha_max));

  const Scene hard = make_scene(2, 1, 4, 10, 1e6);
  CHECK_FALSE(find_feasible_start(build_joint_mrc_problem(hard, ch), hard).has_value());

  // Uneven demands that the even split cannot meet but a re-balanced
  // allocation can: phase I has to find it.
  const auto mp = max_power_point(s, true);
  const auto p = powers_of(mp, 2);
  const auto a = alphas_of(mp, s);
  Scene skew = s;
  skew.sinr_demands = {1.05 * mrc_sinr_closed_form(0, p, a, s, ch), 1e-3};
  const SpProblem skew_sp = build_joint_mrc_problem(skew, ch);
  CHECK(max_constraint_ratio(skew_sp, mp) > 1.0);
  const auto start = find_feasible_start(skew_sp, skew);
  if (start) CHECK(max_constraint_ratio(skew_sp, *start) <= 1.0 + 1e-9);
}

TEST_CASE("fixed-amplification problems") {
  const Scene s = make_scene(2, 1, 4, 10, 0.5);
  const ChannelSet ch = generate_channels(s, 0);
  const SpProblem zf = build_txonly_problem(s, ch, CombinerScheme::Zf);
  const SpProblem mrc = build_txonly_problem(s, ch, CombinerScheme::Mrc);
  for (const SpProblem* sp : {&zf, &mrc}) {
    for (const auto& [v, b] : sp->bounds) CHECK(v.kind == VarKind::TxPower);
    for (const auto& c : sp->constraints) {
      for (const auto& t : c.denominator.terms()) CHECK(t.degree(VarKind::TxPower) <= 1.0);
      for (const auto& t : c.numerator.terms()) CHECK(t.degree(VarKind::TxPower) <= 1.0);
    }
  }
  // ZF removes interference: the numerator of each SINR constraint is constant.
  for (std::size_t j = 0; j < 2; ++j) {
    for (const auto& t : zf.constraints[j].numerator.terms()) CHECK(t.exponents().empty());
  }
  // Constant offset K * alpha_max is part of the objective.
  CHECK(evaluate(mrc.objective, {{tx_power(0), 1.0}, {tx_power(1), 2.0}}) == doctest::Approx(3.0 + 8.0));

  const Scene thin = make_scene(2, 1, 1, 2, 0.5);
  CHECK_THROWS_AS(build_txonly_problem(thin, generate_channels(thin, 0), CombinerScheme::Zf),
                  RankDeficient);
}

TEST_CASE("fixed-amplification MRC matches a grid oracle over p") {
  const Scene s = make_scene(2, 1, 4, 10, 0.5);
  const ChannelSet ch = generate_channels(s, 3);
  const SpProblem sp = build_txonly_problem(s, ch, CombinerScheme::Mrc);
  const auto start = find_feasible_start(sp, s);
  REQUIRE(start.has_value());
  const SpResult r = solve_sp(sp, *start);
  const std::vector<double> a(4, 2.0);
  double best = std::numeric_limits<double>::infinity();
  double lo[2] = {1e-6, 1e-6}, hi[2] = {100.0, 100.0}, arg[2] = {0, 0};
  const int n = 200;
  for (int pass = 0; pass < 3; ++pass) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::vector<double> p{lo[0] * std::pow(hi[0] / lo[0], i / (n - 1.0)),
                                    lo[1] * std::pow(hi[1] / lo[1], j / (n - 1.0))};
        const double f = p[0] + p[1] + 8.0;
        if (f >= best) continue;
        if (mrc_sinr_closed_form(0, p, a, s, ch) < 0.5 || mrc_sinr_closed_form(1, p, a, s, ch) < 0.5) continue;
        best = f;
        arg[0] = p[0];
        arg[1] = p[1];
      }
    }
    for (int d = 0; d < 2; ++d) {
      const double cell = std::pow(hi[d] / lo[d], 1.0 / (n - 1.0));
      lo[d] = std::max(1e-9, arg[d] / (cell * cell));
      hi[d] = std::min(100.0, arg[d] * cell * cell);
    }
  }
  // Compare the variable part; the constant 8 would hide a 1% error.
  CHECK(r.trace.objectives.back() - 8.0 == doctest::Approx(best - 8.0).epsilon(0.01));
}

TEST_CASE("optimal objective is non-decreasing in the demand") {
  const Scene base = make_scene(2, 1, 4, 10, 0.1);
  const ChannelSet ch = generate_channels(base, 0);
  double previous = 0.0;
  for (double psi : {0.1, 0.3, 0.6, 1.0}) {
    Scene s = base;
    s.sinr_demands = {psi, 0.2};
    const SpProblem sp = build_txonly_problem(s, ch, CombinerScheme::Mrc);
    const auto start = find_feasible_start(sp, s);
    REQUIRE(start.has_value());
    const double f = solve_sp(sp, *start).trace.objectives.back();
    CHECK(f >= previous * (1 - 1e-6));
    previous = f;
  }
}

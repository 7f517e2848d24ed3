#include <random>

#include "doctest.h"
#include "rfsense/beamforming.hpp"
#include "rfsense/signal_chain.hpp"
#include "rfsense/sinr_model.hpp"

using namespace rfsense;

namespace {

Scene make_scene(int targets, int clutter, int k, int r) {
  Scene s;
  s.geometry = {2, 2};
  const double az[] = {20, 45, 70, 10, 60};
  const double el[] = {40, 30, 85, 60, 20};
  for (int i = 0; i < targets + clutter; ++i) {
    s.objects.push_back({i < targets ? ObjectKind::Target : ObjectKind::Clutter, az[i], el[i], 1.0 + 0.5 * i});
  }
  s.sensors = {k, 2.0, 0.5};
  s.fusion = {r, 0.5};
  s.sinr_demands.assign(targets, 1.0);
  return s;
}

Assignment point_of(const std::vector<double>& p, const std::vector<double>& a) {
  Assignment x;
  for (std::size_t j = 0; j < p.size(); ++j) x[tx_power(static_cast<int>(j))] = p[j];
  for (std::size_t k = 0; k < a.size(); ++k) x[amplification(static_cast<int>(k))] = a[k];
  return x;
}

}  // namespace

TEST_CASE("a single sensor always satisfies the cross-term condition") {
  const Scene s = make_scene(2, 1, 1, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Lemma1Report r = lemma1_check(generate_channels(s, seed), 2);
    CHECK(r.posynomial);
    CHECK(r.violations.empty());
  }
}

TEST_CASE("all-real positive channels satisfy the condition") {
  const Scene s = make_scene(2, 1, 3, 2);
  ChannelSet ch = generate_channels(s, 1);
  ch.g = ch.g.cwiseAbs().cast<Complex>();
  CHECK(lemma1_check(ch, 2).posynomial);
}

TEST_CASE("sign-flipped channel is reported as a violation") {
  const Scene s = make_scene(1, 1, 2, 1);
  ChannelSet ch = generate_channels(s, 2);
  ch.g(0, 0) = 1.0;
  ch.g(1, 0) = 1.0;
  ch.g(0, 1) = 1.0;
  ch.g(1, 1) = -1.0;
  const Lemma1Report r = lemma1_check(ch, 1);
  CHECK_FALSE(r.posynomial);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].target == 0);
  CHECK(r.violations[0].interferer == 1);
  CHECK(r.violations[0].sensor_k == 0);
  CHECK(r.violations[0].sensor_l == 1);
  CHECK(r.violations[0].real_part == doctest::Approx(-1.0));
}

TEST_CASE("no interferers gives an empty interference term") {
  const Scene s = make_scene(1, 0, 3, 2);
  const ChannelSet ch = generate_channels(s, 3);
  const MrcSinrModel m = build_mrc_sinr_signomial(0, s, ch, mrt_incident_coefficients(s));
  CHECK(m.interference_plus.empty());
  CHECK(m.interference_minus.empty());
  CHECK(m.interference().empty());
}

TEST_CASE("symbolic terms match the numeric closed form") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Scene s = make_scene(1 + trial % 3, trial % 2, 1 + trial % 4, 1 + trial % 3);
    const ChannelSet ch = generate_channels(s, 50 + trial);
    const Eigen::MatrixXd coeffs = mrt_incident_coefficients(s);
    std::vector<double> p(s.target_count()), a(s.sensors.sensor_count);
    for (double& v : p) v = u(rng);
    for (double& v : a) v = u(rng) * 0.6;
    const Assignment x = point_of(p, a);
    for (int j = 0; j < s.target_count(); ++j) {
      const MrcSinrModel m = build_mrc_sinr_signomial(j, s, ch, coeffs);
      const SinrTerms t = mrc_sinr_closed_form_terms(j, p, a, s, ch);
      CHECK(evaluate(m.desired, x) == doctest::Approx(t.desired).epsilon(1e-10));
      CHECK(evaluate(m.interference(), x) == doctest::Approx(t.interference).epsilon(1e-10).scale(t.desired));
      CHECK(evaluate(m.sensor_noise, x) == doctest::Approx(t.sensor_noise).epsilon(1e-10));
      CHECK(evaluate(m.fc_noise, x) == doctest::Approx(t.fc_noise).epsilon(1e-10));
      // The ratio sits on the same side of 1 as demand / SINR and equals 1
      // when the demand is exactly the achieved SINR.
      const double ratio = evaluate(m.numerator(), x) / evaluate(m.denominator(), x);
      CHECK(((ratio - 1.0) > 0) == ((m.demand / t.ratio() - 1.0) > 0));
      Scene tight = s;
      tight.sinr_demands[j] = t.ratio();
      const MrcSinrModel mt = build_mrc_sinr_signomial(j, tight, ch, coeffs);
      CHECK(evaluate(mt.numerator(), x) / evaluate(mt.denominator(), x) ==
            doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("term degrees follow the model") {
  const Scene s = make_scene(2, 1, 3, 2);
  const ChannelSet ch = generate_channels(s, 5);
  const MrcSinrModel m = build_mrc_sinr_signomial(0, s, ch, mrt_incident_coefficients(s));
  for (const Monomial& t : m.desired.terms()) {
    CHECK(t.degree(VarKind::TxPower) == 1.0);
    CHECK(t.degree(VarKind::Amplification) == 2.0);
  }
  for (const Posynomial* p : {&m.interference_plus, &m.interference_minus}) {
    for (const Monomial& t : p->terms()) {
      CHECK(t.degree(VarKind::TxPower) == 1.0);
      CHECK(t.degree(VarKind::Amplification) == 2.0);
    }
  }
  for (const Monomial& t : m.sensor_noise.terms()) {
    CHECK(t.degree(VarKind::TxPower) == 0.0);
    CHECK(t.degree(VarKind::Amplification) == 2.0);
  }
  for (const Monomial& t : m.fc_noise.terms()) {
    CHECK(t.degree(VarKind::TxPower) == 0.0);
    CHECK(t.degree(VarKind::Amplification) == 1.0);
  }
}

TEST_CASE("a passing cross-term check implies an empty minus part") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200 && checked < 10; ++seed) {
    const Scene s = make_scene(2, 1, 2, 2);
    const ChannelSet ch = generate_channels(s, seed);
    const Lemma1Report r = lemma1_check(ch, 2);
    const Eigen::MatrixXd coeffs = mrt_incident_coefficients(s);
    for (int j = 0; j < 2; ++j) {
      const MrcSinrModel m = build_mrc_sinr_signomial(j, s, ch, coeffs);
      bool target_violates = false;
      for (const auto& v : r.violations) target_violates = target_violates || v.target == j;
      CHECK(m.interference_minus.empty() == !target_violates);
    }
    if (r.posynomial) ++checked;
  }
  CHECK(checked > 0);
}

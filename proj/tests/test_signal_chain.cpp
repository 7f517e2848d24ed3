#include <cmath>
#include <random>

#include "doctest.h"
#include "rfsense/beamforming.hpp"
#include "rfsense/error.hpp"
#include "rfsense/signal_chain.hpp"

using namespace rfsense;

namespace {

Scene paper_like(int k, int r) {
  Scene s;
  s.geometry = {2, 2};
  s.objects = {{ObjectKind::Target, 20, 40, 1}, {ObjectKind::Target, 45, 30, 1},
               {ObjectKind::Clutter, 70, 85, 1}};
  s.sensors = {k, 2.0, 0.5};
  s.fusion = {r, 0.5};
  s.sinr_demands = {1.0, 1.0};
  return s;
}

ChannelSet scalar_channels(std::vector<std::vector<Complex>> g, std::vector<Complex> f) {
  ChannelSet ch;
  ch.g.resize(static_cast<int>(g.size()), static_cast<int>(g[0].size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t k = 0; k < g[i].size(); ++k) ch.g(i, k) = g[i][k];
  }
  for (Complex v : f) ch.f.push_back(CVector::Constant(1, v));
  return ch;
}

std::vector<double> deltas(const Scene& s, const std::vector<double>& p) {
  const Eigen::VectorXd d =
      mrt_incident_coefficients(s) * Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
  return {d.data(), d.data() + d.size()};
}

std::vector<double> responses(const Scene& s) {
  std::vector<double> q;
  for (const auto& o : s.objects) q.push_back(o.response_power);
  return q;
}

}  // namespace

TEST_CASE("equivalent channels stack amplified sensor channels") {
  const Scene s = paper_like(3, 4);
  const ChannelSet ch = generate_channels(s, 1);
  const std::vector<double> a{0.5, 1.0, 2.0};
  const EquivalentChannels eq = equivalent_channels(ch, a, 0.5);
  REQUIRE(eq.dimension() == 12);
  REQUIRE(eq.object_count() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      for (int n = 0; n < 4; ++n) {
        CHECK(std::abs(eq.w(k * 4 + n, i) - std::sqrt(a[k]) * ch.g(i, k) * ch.f[k](n)) < 1e-15);
      }
    }
  }
  // Block-diagonal sensor noise covariance, block k = alpha_k sigma^2 f_k f_k^H.
  CHECK(std::abs(eq.sensor_noise_cov(0, 4)) == 0.0);
  CHECK(std::abs(eq.sensor_noise_cov(9, 10) - 2.0 * 0.5 * ch.f[2](1) * std::conj(ch.f[2](2))) < 1e-14);
}

TEST_CASE("MRC combiner is the target columns of the stacked channels") {
  const Scene s = paper_like(4, 3);
  const ChannelSet ch = generate_channels(s, 2);
  const EquivalentChannels eq = equivalent_channels(ch, std::vector<double>(4, 2.0), 0.5);
  const Combiner c = mrc_combiner(eq, 2);
  CHECK(c.scheme == CombinerScheme::Mrc);
  REQUIRE(c.columns.cols() == 2);
  CHECK((c.columns - eq.w.leftCols(2)).norm() == 0.0);
}

TEST_CASE("ZF combiner nulls every other object") {
  const Scene s = paper_like(4, 10);
  const ChannelSet ch = generate_channels(s, 3);
  const EquivalentChannels eq = equivalent_channels(ch, std::vector<double>(4, 1.3), 0.5);
  const Combiner zf = zf_combiner(eq, 2);
  const CMatrix vw = zf.columns.adjoint() * eq.w;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 3; ++i) CHECK(std::abs(vw(j, i) - (i == j ? 1.0 : 0.0)) < 1e-10);
  }
}

TEST_CASE("ZF reports rank deficiency") {
  // K*R = 2 < N+N' = 3.
  Scene s = paper_like(1, 2);
  ChannelSet ch = generate_channels(s, 4);
  CHECK_THROWS_AS(zf_combiner(equivalent_channels(ch, std::vector<double>{1.0}, 0.5), 2),
                  RankDeficient);
  // K*R = 20 but every stacked channel lies in span{f_1, f_2}.
  s = paper_like(2, 10);
  ch = generate_channels(s, 4);
  CHECK_THROWS_AS(zf_combiner(equivalent_channels(ch, std::vector<double>{1.0, 1.0}, 0.5), 2),
                  RankDeficient);
  // Two objects with identical channels are not separable.
  s = paper_like(3, 2);
  ch = generate_channels(s, 4);
  ch.g.row(1) = ch.g.row(0);
  CHECK_THROWS_AS(zf_combiner(equivalent_channels(ch, std::vector<double>(3, 1.0), 0.5), 2),
                  RankDeficient);
}

TEST_CASE("hand-computed single-sensor SINR") {
  Scene s;
  s.geometry = {1, 1};
  s.objects = {{ObjectKind::Target, 0, 90, 1}};
  s.sensors = {1, 1.0, 0.5};
  s.fusion = {1, 0.5};
  s.sinr_demands = {1.0};
  const ChannelSet ch = scalar_channels({{1.0}}, {1.0});
  // desired = p, sensor noise = 0.5, fusion noise = 0.5
  CHECK(mrc_sinr_closed_form(0, std::vector<double>{3.0}, std::vector<double>{1.0}, s, ch) ==
        doctest::Approx(3.0));
  const EquivalentChannels eq = equivalent_channels(ch, std::vector<double>{1.0}, 0.5);
  CHECK(sinr(0, mrc_combiner(eq, 1), eq, std::vector<double>{3.0}, std::vector<double>{1.0}, 0.5) ==
        doctest::Approx(3.0));
}

TEST_CASE("hand-computed two-object interference") {
  Scene s;
  s.geometry = {1, 1};
  s.objects = {{ObjectKind::Target, 0, 90, 2}, {ObjectKind::Clutter, 0, 90, 1}};
  s.sensors = {2, 1.0, 1.0};
  s.fusion = {1, 1.0};
  s.sinr_demands = {1.0};
  const ChannelSet ch = scalar_channels({{1.0, 1.0}, {1.0, -1.0}}, {1.0, 1.0});
  // w_1 = [1, 1], w_2 = [1, -1] with alpha = 1: the clutter is orthogonal.
  // desired = delta Q |w1^H w1|^2 = p * 2 * 4, noise = 2 + 2.
  const std::vector<double> p{1.5};
  const std::vector<double> a{1.0, 1.0};
  CHECK(mrc_sinr_closed_form(0, p, a, s, ch) == doctest::Approx(1.5 * 2 * 4 / 4.0));
  const SinrTerms t = mrc_sinr_closed_form_terms(0, p, a, s, ch);
  CHECK(t.interference == doctest::Approx(0.0));
  // alpha = (2, 1): w_2^H w_1 = 2 - 1 = 1, interference = delta_2 Q_2 * 1.
  const std::vector<double> a2{2.0, 1.0};
  const SinrTerms t2 = mrc_sinr_closed_form_terms(0, p, a2, s, ch);
  CHECK(t2.interference == doctest::Approx(1.5));
  CHECK(t2.desired == doctest::Approx(1.5 * 2 * 9));
  CHECK(t2.sensor_noise == doctest::Approx(4 + 1));
  CHECK(t2.fc_noise == doctest::Approx(3));
}

TEST_CASE("closed-form MRC SINR agrees with the general formula") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Scene s = paper_like(1 + trial % 4, 1 + trial % 5);
    const ChannelSet ch = generate_channels(s, 100 + trial);
    const std::vector<double> p{u(rng) * 10, u(rng) * 10};
    std::vector<double> a(s.sensors.sensor_count);
    for (double& x : a) x = u(rng);
    const EquivalentChannels eq = equivalent_channels(ch, a, s.sensors.sensor_noise_var);
    for (int j = 0; j < 2; ++j) {
      const double general = sinr(j, mrc_combiner(eq, 2), eq, deltas(s, p), responses(s), 0.5);
      CHECK(mrc_sinr_closed_form(j, p, a, s, ch) == doctest::Approx(general).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed form requires matching noise variances") {
  Scene s = paper_like(2, 2);
  s.fusion.fc_noise_var = 0.7;
  const ChannelSet ch = generate_channels(s, 5);
  CHECK_THROWS_AS(mrc_sinr_closed_form(0, std::vector<double>{1, 1}, std::vector<double>{1, 1}, s, ch),
                  NoiseMismatch);
}

TEST_CASE("a zero combiner column yields zero SINR") {
  const Scene s = paper_like(2, 2);
  const ChannelSet ch = generate_channels(s, 6);
  const EquivalentChannels eq = equivalent_channels(ch, std::vector<double>{1, 1}, 0.5);
  Combiner c{CMatrix::Zero(4, 2), CombinerScheme::Custom};
  const SinrTerms t = sinr_terms(0, c, eq, deltas(s, {1, 1}), responses(s), 0.5);
  CHECK(t.zero_combiner);
  CHECK(t.ratio() == 0.0);
}

TEST_CASE("mutual information") {
  CHECK(mutual_information(0.0) == 0.0);
  CHECK(mutual_information(3.0) == doctest::Approx(2.0));
  CHECK_THROWS(mutual_information(-0.1));
}

TEST_CASE("achieved SINR dispatches on the combiner") {
  const Scene s = paper_like(4, 10);
  const ChannelSet ch = generate_channels(s, 7);
  const std::vector<double> p{2.0, 3.0};
  const std::vector<double> a{2, 2, 2, 2};
  const auto mrc = achieved_sinr(s, ch, p, a, CombinerScheme::Mrc);
  const auto zf = achieved_sinr(s, ch, p, a, CombinerScheme::Zf);
  for (int j = 0; j < 2; ++j) {
    CHECK(mrc[j] == doctest::Approx(mrc_sinr_closed_form(j, p, a, s, ch)).epsilon(1e-12));
    const EquivalentChannels eq = equivalent_channels(ch, a, 0.5);
    CHECK(zf[j] == doctest::Approx(sinr(j, zf_combiner(eq, 2), eq, deltas(s, p), responses(s), 0.5)));
  }
}

#include "rfsense/sinr_model.hpp"

#include <cmath>

namespace rfsense {
namespace {

Monomial power_amp_amp(int t, int k, int l, double coefficient) {
  return Monomial(coefficient, {{tx_power(t), 1.0}, {amplification(k), 1.0}, {amplification(l), 1.0}});
}

}  // namespace

Lemma1Report lemma1_check(const ChannelSet& channels, int target_count) {
  Lemma1Report report;
  const auto& g = channels.g;
  for (int j = 0; j < target_count; ++j) {
    for (int i = 0; i < channels.object_count(); ++i) {
      if (i == j) continue;
      for (int k = 0; k < channels.sensor_count(); ++k) {
        for (int l = k + 1; l < channels.sensor_count(); ++l) {
          const double re =
              std::real(g(j, k) * std::conj(g(i, k)) * std::conj(g(j, l)) * g(i, l));
          if (re < 0.0) report.violations.push_back({j, i, k, l, re});
        }
      }
    }
  }
  report.posynomial = report.violations.empty();
  return report;
}

Posynomial MrcSinrModel::numerator() const {
  return (interference_plus + sensor_noise + fc_noise) * demand;
}

Posynomial MrcSinrModel::denominator() const {
  if (interference_minus.empty()) return desired;
  return desired + interference_minus * demand;
}

MrcSinrModel build_mrc_sinr_signomial(int target, const Scene& scene, const ChannelSet& channels,
                                      const Eigen::MatrixXd& delta_coefficients) {
  const int j = target;
  const int sensors = channels.sensor_count();
  const int targets = static_cast<int>(delta_coefficients.cols());
  const auto& g = channels.g;

  std::vector<double> f2(sensors);
  for (int k = 0; k < sensors; ++k) f2[k] = channels.f[k].squaredNorm();

  MrcSinrModel model;
  model.target = j;
  model.demand = scene.sinr_demands.at(j);

  // desired: delta_j Q_j (sum_k alpha_k |g_jk|^2 ||f_k||^2)^2
  {
    std::vector<Monomial> terms;
    const double qj = scene.objects[j].response_power;
    for (int t = 0; t < targets; ++t) {
      const double ct = delta_coefficients(j, t);
      for (int k = 0; k < sensors; ++k) {
        const double ak = std::norm(g(j, k)) * f2[k];
        for (int l = k; l < sensors; ++l) {
          const double al = std::norm(g(j, l)) * f2[l];
          const double c = qj * ct * ak * al * (k == l ? 1.0 : 2.0);
          if (c > 0.0) terms.push_back(power_amp_amp(t, k, l, c));
        }
      }
    }
    model.desired = Posynomial(std::move(terms));
  }

  // interference: sum_{i != j} delta_i Q_i |sum_k alpha_k g_jk g*_ik ||f_k||^2|^2
  {
    Posynomial plus;
    Posynomial minus;
    for (int i = 0; i < scene.object_count(); ++i) {
      if (i == j) continue;
      const double qi = scene.objects[i].response_power;
      std::vector<Monomial> terms;
      for (int t = 0; t < targets; ++t) {
        const double ct = delta_coefficients(i, t);
        if (ct == 0.0) continue;
        for (int k = 0; k < sensors; ++k) {
          for (int l = k; l < sensors; ++l) {
            double cross;
            if (k == l) {
              cross = std::norm(g(j, k)) * std::norm(g(i, k)) * f2[k] * f2[k];
            } else {
              const Complex prod = g(j, k) * std::conj(g(i, k)) * std::conj(g(j, l)) * g(i, l);
              cross = 2.0 * f2[k] * f2[l] * prod.real();
            }
            const double c = qi * ct * cross;
            if (c != 0.0) terms.push_back(power_amp_amp(t, k, l, c));
          }
        }
      }
      SignomialSplit split = split_signomial(Signomial(std::move(terms)));
      plus = plus + split.plus;
      minus = minus + split.minus;
    }
    model.interference_plus = std::move(plus);
    model.interference_minus = std::move(minus);
  }

  {
    std::vector<Monomial> ns;
    std::vector<Monomial> nfc;
    for (int k = 0; k < sensors; ++k) {
      const double gj2 = std::norm(g(j, k));
      const double c_ns = scene.sensors.sensor_noise_var * gj2 * f2[k] * f2[k];
      const double c_fc = scene.fusion.fc_noise_var * gj2 * f2[k];
      if (c_ns > 0.0) ns.push_back(Monomial::variable(amplification(k), 2.0, c_ns));
      if (c_fc > 0.0) nfc.push_back(Monomial::variable(amplification(k), 1.0, c_fc));
    }
    model.sensor_noise = Posynomial(std::move(ns));
    model.fc_noise = Posynomial(std::move(nfc));
  }
  return model;
}

}  // namespace rfsense

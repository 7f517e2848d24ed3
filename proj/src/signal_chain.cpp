#include "rfsense/signal_chain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rfsense/beamforming.hpp"
#include "rfsense/error.hpp"
#include "rfsense/kernels.hpp"

namespace rfsense {
namespace {

std::span<const Complex> column(const CMatrix& m, int c) {
  return {m.col(c).data(), static_cast<std::size_t>(m.rows())};
}

}  // namespace

EquivalentChannels equivalent_channels(const ChannelSet& channels, std::span<const double> alphas,
                                       double sensor_noise_var) {
  const int sensors = channels.sensor_count();
  const int antennas = channels.fc_antennas();
  if (static_cast<int>(alphas.size()) != sensors) {
    throw std::invalid_argument("equivalent_channels: one amplification per sensor required");
  }
  for (double a : alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("equivalent_channels: amplifications must be positive");
  }

  EquivalentChannels eq;
  eq.sensors = sensors;
  eq.antennas = antennas;
  const int dim = sensors * antennas;
  eq.w.resize(dim, channels.object_count());
  eq.sensor_noise_cov = CMatrix::Zero(dim, dim);
  for (int k = 0; k < sensors; ++k) {
    const CVector& fk = channels.f[k];
    const double root = std::sqrt(alphas[k]);
    for (int i = 0; i < channels.object_count(); ++i) {
      eq.w.block(k * antennas, i, antennas, 1) = (root * channels.g(i, k)) * fk;
    }
    eq.sensor_noise_cov.block(k * antennas, k * antennas, antennas, antennas) =
        (alphas[k] * sensor_noise_var) * (fk * fk.adjoint());
  }
  return eq;
}

Combiner mrc_combiner(const EquivalentChannels& eq, int target_count) {
  return {eq.w.leftCols(target_count), CombinerScheme::Mrc};
}

Combiner zf_combiner(const EquivalentChannels& eq, int target_count, double max_condition) {
  const int dim = eq.dimension();
  const int objects = eq.object_count();
  if (dim < objects) {
    std::ostringstream msg;
    msg << "zero-forcing needs K*R >= N+N' (have " << dim << " < " << objects << ")";
    throw RankDeficient(msg.str());
  }
  // Slot k of every stacked channel is a multiple of f_k, so rank(W) <= K.
  if (eq.sensors < objects) {
    std::ostringstream msg;
    msg << "zero-forcing needs K >= N+N' since the stacked channels span at most K dimensions (have "
        << eq.sensors << " < " << objects << ")";
    throw RankDeficient(msg.str());
  }

  // W = QR  =>  W (W^H W)^{-1} = Q R^{-H}; cond(W^H W) = cond(R)^2.
  Eigen::HouseholderQR<CMatrix> qr(eq.w);
  const CMatrix r = qr.matrixQR().topRows(objects).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<CMatrix> svd(r);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(objects - 1);
  const double condition = (smin > 0.0) ? (smax / smin) * (smax / smin)
                                        : std::numeric_limits<double>::infinity();
  if (!(condition <= max_condition)) {
    std::ostringstream msg;
    msg << "zero-forcing Gram matrix condition number " << condition << " exceeds "
        << max_condition;
    throw RankDeficient(msg.str());
  }

  const CMatrix q = qr.householderQ() * CMatrix::Identity(dim, objects);
  // V = Q R^{-H}  <=>  V R^H = Q  <=>  R V^H = Q^H
  const CMatrix vh = r.triangularView<Eigen::Upper>().solve(CMatrix(q.adjoint()));
  return {vh.adjoint().leftCols(target_count), CombinerScheme::Zf};
}

double SinrTerms::ratio() const {
  if (zero_combiner || desired <= 0.0) return 0.0;
  const double d = denominator();
  if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
  return desired / d;
}

SinrTerms sinr_terms(int target, const Combiner& combiner, const EquivalentChannels& eq,
                     std::span<const double> deltas, std::span<const double> response_powers,
                     double fc_noise_var) {
  if (combiner.columns.rows() != eq.dimension()) {
    throw std::invalid_argument("sinr: combiner dimension does not match the receive model");
  }
  const auto v = column(combiner.columns, target);
  SinrTerms out;
  const double vnorm2 = combiner.columns.col(target).squaredNorm();
  if (vnorm2 == 0.0) {
    out.zero_combiner = true;
    return out;
  }
  for (int i = 0; i < eq.object_count(); ++i) {
    const double gain = std::norm(kernels::dot_conj(v, column(eq.w, i)));
    const double power = deltas[i] * response_powers[i] * gain;
    if (i == target) {
      out.desired = power;
    } else {
      out.interference += power;
    }
  }
  const CVector& vj = combiner.columns.col(target);
  out.sensor_noise = std::real(vj.dot(eq.sensor_noise_cov * vj));
  out.fc_noise = fc_noise_var * vnorm2;
  return out;
}

double sinr(int target, const Combiner& combiner, const EquivalentChannels& eq,
            std::span<const double> deltas, std::span<const double> response_powers,
            double fc_noise_var) {
  return sinr_terms(target, combiner, eq, deltas, response_powers, fc_noise_var).ratio();
}

SinrTerms mrc_sinr_closed_form_terms(int target, std::span<const double> powers,
                                     std::span<const double> alphas, const Scene& scene,
                                     const ChannelSet& channels) {
  if (scene.sensors.sensor_noise_var != scene.fusion.fc_noise_var) {
    throw NoiseMismatch("closed-form MRC SINR requires equal sensor and fusion-center noise");
  }
  const double noise = scene.fusion.fc_noise_var;
  const Eigen::MatrixXd coeffs = mrt_incident_coefficients(scene);
  const Eigen::VectorXd delta =
      coeffs * Eigen::Map<const Eigen::VectorXd>(powers.data(), static_cast<long>(powers.size()));

  const int sensors = channels.sensor_count();
  const auto& g = channels.g;
  double gain = 0.0;  // sum_k alpha_k |g_jk|^2 ||f_k||^2
  double sensor_noise = 0.0;
  for (int k = 0; k < sensors; ++k) {
    const double f2 = channels.f[k].squaredNorm();
    const double gj2 = std::norm(g(target, k));
    gain += alphas[k] * gj2 * f2;
    sensor_noise += alphas[k] * alphas[k] * gj2 * f2 * f2;
  }

  SinrTerms out;
  const double qj = scene.objects[target].response_power;
  out.desired = delta(target) * qj * gain * gain;
  for (int i = 0; i < scene.object_count(); ++i) {
    if (i == target) continue;
    Complex cross = 0.0;
    for (int k = 0; k < sensors; ++k) {
      cross += alphas[k] * g(target, k) * std::conj(g(i, k)) * channels.f[k].squaredNorm();
    }
    out.interference += delta(i) * scene.objects[i].response_power * std::norm(cross);
  }
  out.sensor_noise = noise * sensor_noise;
  out.fc_noise = noise * gain;
  return out;
}

double mrc_sinr_closed_form(int target, std::span<const double> powers,
                            std::span<const double> alphas, const Scene& scene,
                            const ChannelSet& channels) {
  return mrc_sinr_closed_form_terms(target, powers, alphas, scene, channels).ratio();
}

double mutual_information(double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("mutual_information: SINR must be nonnegative");
  return std::log2(1.0 + rho);
}

std::vector<double> achieved_sinr(const Scene& scene, const ChannelSet& channels,
                                  std::span<const double> powers, std::span<const double> alphas,
                                  CombinerScheme scheme) {
  const int targets = scene.target_count();
  const EquivalentChannels eq =
      equivalent_channels(channels, alphas, scene.sensors.sensor_noise_var);
  const Combiner combiner =
      scheme == CombinerScheme::Zf ? zf_combiner(eq, targets) : mrc_combiner(eq, targets);
  const Eigen::MatrixXd coeffs = mrt_incident_coefficients(scene);
  const Eigen::VectorXd delta =
      coeffs * Eigen::Map<const Eigen::VectorXd>(powers.data(), static_cast<long>(powers.size()));
  std::vector<double> q;
  for (const SceneObject& o : scene.objects) q.push_back(o.response_power);

  std::vector<double> out;
  for (int j = 0; j < targets; ++j) {
    out.push_back(sinr(j, combiner, eq, {delta.data(), static_cast<std::size_t>(delta.size())}, q,
                       scene.fusion.fc_noise_var));
  }
  return out;
}

}  // namespace rfsense

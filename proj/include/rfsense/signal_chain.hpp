#pragma once

#include <span>

#include "rfsense/scene.hpp"

namespace rfsense {

/// Stacked space-time receive model at the fusion center. Column i of `w` is
/// the equivalent channel of object i; block k (rows k*R .. k*R+R-1) equals
/// sqrt(alpha_k) g_ik f_k. `sensor_noise_cov` is block-diagonal with k-th
/// block alpha_k sigma_n^2 f_k f_k^H.
struct EquivalentChannels {
  CMatrix w;
  CMatrix sensor_noise_cov;
  int sensors = 0;
  int antennas = 0;

  int dimension() const { return static_cast<int>(w.rows()); }
  int object_count() const { return static_cast<int>(w.cols()); }
};

EquivalentChannels equivalent_channels(const ChannelSet& channels, std::span<const double> alphas,
                                       double sensor_noise_var);

enum class CombinerScheme { Mrc, Zf, Custom };

/// Post-processing matrix V; column j serves target j.
struct Combiner {
  CMatrix columns;
  CombinerScheme scheme = CombinerScheme::Custom;
};

/// v_j = w_j for each of the leading `target_count` objects.
Combiner mrc_combiner(const EquivalentChannels& eq, int target_count);

/// Leading `target_count` columns of W (W^H W)^{-1}, computed through a QR
/// factorization of W. Throws RankDeficient when K*R < N+N' or the Gram
/// matrix condition number exceeds `max_condition`.
Combiner zf_combiner(const EquivalentChannels& eq, int target_count,
                     double max_condition = 1e12);

/// The four variance terms of a target's SINR under a given combiner.
struct SinrTerms {
  double desired = 0.0;
  double interference = 0.0;
  double sensor_noise = 0.0;
  double fc_noise = 0.0;
  bool zero_combiner = false;

  double denominator() const { return interference + sensor_noise + fc_noise; }
  /// Zero when the combiner column or the desired power vanishes.
  double ratio() const;
};

SinrTerms sinr_terms(int target, const Combiner& combiner, const EquivalentChannels& eq,
                     std::span<const double> deltas, std::span<const double> response_powers,
                     double fc_noise_var);

double sinr(int target, const Combiner& combiner, const EquivalentChannels& eq,
            std::span<const double> deltas, std::span<const double> response_powers,
            double fc_noise_var);

/// MRC SINR terms written directly in the channel gains (no stacked vectors).
/// Requires equal sensor and fusion-center noise variance (NoiseMismatch
/// otherwise).
SinrTerms mrc_sinr_closed_form_terms(int target, std::span<const double> powers,
                                     std::span<const double> alphas, const Scene& scene,
                                     const ChannelSet& channels);

double mrc_sinr_closed_form(int target, std::span<const double> powers,
                            std::span<const double> alphas, const Scene& scene,
                            const ChannelSet& channels);

/// log2(1 + rho) in bits.
double mutual_information(double rho);

/// Convenience: per-target SINR for transmit powers `powers` (MRT) and
/// amplifications `alphas`, using the given combiner scheme.
std::vector<double> achieved_sinr(const Scene& scene, const ChannelSet& channels,
                                  std::span<const double> powers, std::span<const double> alphas,
                                  CombinerScheme scheme);

}  // namespace rfsense

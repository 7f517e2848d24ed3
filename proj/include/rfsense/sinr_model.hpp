#pragma once

// Symbolic MRC SINR terms in the design variables, and the sign condition
// under which the interference term stays a posynomial.

#include <vector>

#include "rfsense/posynomial.hpp"
#include "rfsense/scene.hpp"

namespace rfsense {

/// One cross term Re{g_jk g*_ik g*_jl g_il} (k < l) that came out negative.
/// Indices are zero-based.
struct CrossTermViolation {
  int target;
  int interferer;
  int sensor_k;
  int sensor_l;
  double real_part;
};

struct Lemma1Report {
  bool posynomial = true;
  std::vector<CrossTermViolation> violations;
};

/// Checks Re{g_jk g*_ik g*_jl g_il} >= 0 for every target j < target_count,
/// every other object i and every sensor pair k != l. When it holds the MRC
/// interference term has no negative monomial.
Lemma1Report lemma1_check(const ChannelSet& channels, int target_count);

/// MRC SINR of one target as expressions in (p, alpha). The interference
/// signomial is kept as its difference-of-posynomials split; each
/// interferer's contribution is split on its own, so a negative cross term of
/// one interferer is never absorbed by a positive one of another.
struct MrcSinrModel {
  int target = 0;
  double demand = 0.0;
  Posynomial desired;             ///< degree 1 in p, 2 in alpha
  Posynomial interference_plus;   ///< degree 1 in p, 2 in alpha
  Posynomial interference_minus;  ///< negated negative cross terms
  Posynomial sensor_noise;        ///< degree 2 in alpha
  Posynomial fc_noise;            ///< degree 1 in alpha

  Signomial interference() const {
    return interference_plus.as_signomial() - interference_minus.as_signomial();
  }

  /// demand * (interference_plus + sensor_noise + fc_noise)
  Posynomial numerator() const;
  /// desired + demand * interference_minus
  Posynomial denominator() const;
};

/// `delta_coefficients` is the (N+N') x N incident-power map of the MRT
/// precoder (see mrt_incident_coefficients).
MrcSinrModel build_mrc_sinr_signomial(int target, const Scene& scene, const ChannelSet& channels,
                                      const Eigen::MatrixXd& delta_coefficients);

}  // namespace rfsense

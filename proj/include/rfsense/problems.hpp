#pragma once

#include <optional>
#include <vector>

#include "rfsense/scene.hpp"
#include "rfsense/signal_chain.hpp"
#include "rfsense/sp_solver.hpp"

namespace rfsense {

/// Lower bound replacing p >= 0 and alpha >= 0 (geometric programs need
/// strictly positive variables).
inline constexpr double kVariableFloor = 1e-9;

/// min sum_j p_j + sum_k alpha_k
///   s.t. MRC SINR_j >= psi_j (one ratio constraint per target),
///        sum_j p_j / P_max <= 1,  alpha_k <= alpha_max.
/// Constraint order: targets first, then the sum-power cap.
SpProblem build_joint_mrc_problem(const Scene& scene, const ChannelSet& channels);

/// Transmit powers only, with every alpha_k frozen at alpha_max and the
/// combiner (MRC or ZF) computed at that amplification. The objective keeps
/// the constant K * alpha_max. Throws RankDeficient for ZF when the stacked
/// channel matrix is not of full column rank.
SpProblem build_txonly_problem(const Scene& scene, const ChannelSet& channels,
                               CombinerScheme combiner);

/// p_j = P_max / N for each target and, when `with_amplification`, alpha_k =
/// alpha_max for each sensor.
Assignment max_power_point(const Scene& scene, bool with_amplification);

/// A point satisfying every true constraint: the max-power point when it is
/// feasible, otherwise the result of a slack-maximizing phase-I program
/// solved by successive condensation. nullopt when the best slack is below 1.
std::optional<Assignment> find_feasible_start(const SpProblem& problem, const Scene& scene,
                                              const SpOptions& options = {});

std::vector<double> powers_of(const Assignment& x, int targets);
/// Falls back to alpha_max for sensors that are not variables of `x`.
std::vector<double> alphas_of(const Assignment& x, const Scene& scene);

}  // namespace rfsense

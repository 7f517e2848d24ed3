#pragma once

// Reference computations for the acceptance suite. Each one is written from
// the model definitions with plain loops and shares no code with the library.

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rfsense/scene.hpp"

namespace oracle {

using cd = std::complex<double>;

std::vector<cd> steering(double azimuth_deg, double elevation_deg, int m_count, int mprime_count);

/// E{|a_i^H s|^2} per object, estimated from `samples` draws of the MRT
/// transmit signal s = sum_t sqrt(p_t) u_t x_t with unit-variance Gaussian x_t.
std::vector<double> incident_power_mc(const rfsense::Scene& scene, const std::vector<double>& powers,
                                      long samples, std::mt19937_64& rng);

/// MRC SINR of target j assembled from the stacked equivalent channels.
double mrc_sinr(const rfsense::Scene& scene, const rfsense::ChannelSet& channels,
                const std::vector<double>& powers, const std::vector<double>& alphas, int j);

struct Quad {
  int j, i, k, l;
};

/// All (j, i, k < l) with Re{g_jk conj(g_ik) conj(g_jl) g_il} < 0, i != j.
std::vector<Quad> lemma1_violations(const rfsense::ChannelSet& channels, int targets);

/// Terms of a posynomial in up to three variables: c * prod x_v^{a_v}.
struct Term {
  double c;
  double a[3];
};
using Posy = std::vector<Term>;

struct GridResult {
  bool feasible = false;
  double objective = 0.0;
  double x[3] = {0.0, 0.0, 0.0};
};

/// Minimum of `objective` over a log-spaced grid with `points` samples per
/// axis on [lo, hi]^vars subject to every constraint <= 1. Each of the
/// `zoom_rounds` further passes re-grids a box of +-2 cells around the best
/// point found so far (clipped to [lo, hi]).
GridResult grid_gp(const Posy& objective, const std::vector<Posy>& constraints, int vars, double lo,
                   double hi, int points, int zoom_rounds = 0);

}  // namespace oracle

#pragma once

#include <span>
#include <vector>

#include "rfsense/scene.hpp"

namespace rfsense {

/// Planar-array response toward (azimuth, elevation), both in degrees. The
/// entry for element (m, m') is exp(j*pi*(m sin(az) sin(el) + m' cos(el))),
/// stored at index m * M' + m' (m' varies fastest).
CVector steering_vector(double azimuth_deg, double elevation_deg, const ArrayGeometry& geometry);

/// Steering vectors of every object in scene order.
std::vector<CVector> steering_vectors(const Scene& scene);

struct Precoder {
  std::vector<CVector> directions;  ///< unit-norm beam per target
  std::vector<double> powers;       ///< power per target
};

/// Maximum-ratio transmission: each beam is its target's steering vector
/// normalized to unit length.
std::vector<CVector> mrt_precoder(std::span<const CVector> target_steering);

/// Signal power arriving at each object, delta = C p. `coefficients` is the
/// (N+N') x N map with entry (i, t) = |a_i^H u_t|^2; for targets the diagonal
/// entry is the array gain M*M'.
struct IncidentPowers {
  Eigen::VectorXd delta;
  Eigen::MatrixXd coefficients;
};

IncidentPowers incident_powers(const Scene& scene, const Precoder& precoder);

/// Coefficient map for the MRT precoder of `scene` (independent of powers).
Eigen::MatrixXd mrt_incident_coefficients(const Scene& scene);

}  // namespace rfsense

#include "rfsense/beamforming.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfsense/kernels.hpp"

namespace rfsense {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double abs2(Complex z) { return std::norm(z); }

std::span<const Complex> view(const CVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

CVector steering_vector(double azimuth_deg, double elevation_deg, const ArrayGeometry& geometry) {
  const double theta = azimuth_deg * kDegToRad;
  const double phi = elevation_deg * kDegToRad;
  const double horizontal = std::sin(theta) * std::sin(phi);
  const double vertical = std::cos(phi);

  CVector a(geometry.element_count());
  for (int m = 0; m < geometry.m_count; ++m) {
    for (int mp = 0; mp < geometry.mprime_count; ++mp) {
      const double phase = std::numbers::pi * (m * horizontal + mp * vertical);
      a(m * geometry.mprime_count + mp) = std::polar(1.0, phase);
    }
  }
  return a;
}

std::vector<CVector> steering_vectors(const Scene& scene) {
  std::vector<CVector> out;
  out.reserve(scene.objects.size());
  for (const SceneObject& o : scene.objects) {
    out.push_back(steering_vector(o.azimuth_deg, o.elevation_deg, scene.geometry));
  }
  return out;
}

std::vector<CVector> mrt_precoder(std::span<const CVector> target_steering) {
  if (target_steering.empty()) throw std::invalid_argument("mrt_precoder: no targets");
  std::vector<CVector> out;
  out.reserve(target_steering.size());
  for (const CVector& a : target_steering) out.push_back(a / a.norm());
  return out;
}

IncidentPowers incident_powers(const Scene& scene, const Precoder& precoder) {
  const int targets = static_cast<int>(precoder.directions.size());
  if (static_cast<int>(precoder.powers.size()) != targets) {
    throw std::invalid_argument("incident_powers: one power per beam required");
  }
  const std::vector<CVector> steering = steering_vectors(scene);
  const double gain = scene.geometry.element_count();

  IncidentPowers out;
  out.coefficients.resize(scene.object_count(), targets);
  for (int i = 0; i < scene.object_count(); ++i) {
    for (int t = 0; t < targets; ++t) {
      const bool own_beam = (i == t) && scene.objects[i].kind == ObjectKind::Target;
      out.coefficients(i, t) =
          own_beam ? gain
                   : abs2(kernels::dot_conj(view(steering[i]), view(precoder.directions[t])));
    }
  }
  const Eigen::Map<const Eigen::VectorXd> p(precoder.powers.data(), targets);
  out.delta = out.coefficients * p;
  return out;
}

Eigen::MatrixXd mrt_incident_coefficients(const Scene& scene) {
  const int targets = scene.target_count();
  std::vector<CVector> target_steering;
  for (int j = 0; j < targets; ++j) {
    const SceneObject& o = scene.objects[j];
    target_steering.push_back(steering_vector(o.azimuth_deg, o.elevation_deg, scene.geometry));
  }
  Precoder precoder{mrt_precoder(target_steering), std::vector<double>(targets, 1.0)};
  return incident_powers(scene, precoder).coefficients;
}

}  // namespace rfsense

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rfsense {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Uniform planar transmit array with half-wavelength element spacing.
struct ArrayGeometry {
  int m_count = 1;       ///< horizontal elements
  int mprime_count = 1;  ///< vertical elements

  int element_count() const { return m_count * mprime_count; }
};

enum class ObjectKind { Target, Clutter };

/// A passive reflector. Angles are in degrees; `response_power` is the
/// second-order moment of the object's reflection response.
struct SceneObject {
  ObjectKind kind = ObjectKind::Target;
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double response_power = 1.0;
};

/// Amplify-and-forward sensors.
struct SensorNetwork {
  int sensor_count = 1;
  double alpha_max = 1.0;
  double sensor_noise_var = 1.0;
};

struct FusionCenter {
  int antenna_count = 1;
  double fc_noise_var = 1.0;
};

/// A complete problem instance. Targets occupy the leading entries of
/// `objects`, clutters follow; `sinr_demands` has one entry per target.
struct Scene {
  ArrayGeometry geometry;
  std::vector<SceneObject> objects;
  SensorNetwork sensors;
  FusionCenter fusion;
  double p_max = 100.0;
  std::vector<double> sinr_demands;

  int target_count() const;
  int clutter_count() const;
  int object_count() const { return static_cast<int>(objects.size()); }
};

/// Object-to-sensor gains g (objects x sensors) and sensor-to-fusion-center
/// channels f_k (one length-R vector per sensor).
struct ChannelSet {
  CMatrix g;
  std::vector<CVector> f;

  int object_count() const { return static_cast<int>(g.rows()); }
  int sensor_count() const { return static_cast<int>(g.cols()); }
  int fc_antennas() const { return f.empty() ? 0 : static_cast<int>(f.front().size()); }
};

/// Draws every g_ik and every component of every f_k i.i.d. from the
/// zero-mean, unit-variance circularly-symmetric complex Gaussian. The draw
/// order is fixed (g row by row, then f sensor by sensor), so the result is a
/// pure function of the scene dimensions and the seed.
ChannelSet generate_channels(const Scene& scene, std::uint64_t seed);

enum class Severity { Error, Warning };

struct Violation {
  Severity severity;
  std::string code;
  std::string message;
};

/// Every violated invariant of `scene`. An empty list, or a list holding only
/// warnings, means the scene is usable. The ZF dimensionality shortfall
/// (K*R < N+N') is reported as a warning.
std::vector<Violation> validate_scene(const Scene& scene);

bool has_errors(const std::vector<Violation>& violations);

/// Checks that `channels` matches the dimensions of `scene`.
bool channels_match(const Scene& scene, const ChannelSet& channels);

/// Stable reorder putting targets ahead of clutters.
void order_targets_first(Scene& scene);

}  // namespace rfsense

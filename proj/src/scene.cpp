#include "rfsense/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace rfsense {

int Scene::target_count() const {
  return static_cast<int>(std::count_if(objects.begin(), objects.end(), [](const SceneObject& o) {
    return o.kind == ObjectKind::Target;
  }));
}

int Scene::clutter_count() const { return object_count() - target_count(); }

ChannelSet generate_channels(const Scene& scene, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  auto draw = [&]() {
    const double re = component(rng);
    const double im = component(rng);
    return Complex(re, im);
  };

  const int objects = scene.object_count();
  const int sensors = scene.sensors.sensor_count;
  const int antennas = scene.fusion.antenna_count;

  ChannelSet out;
  out.g.resize(objects, sensors);
  for (int i = 0; i < objects; ++i) {
    for (int k = 0; k < sensors; ++k) out.g(i, k) = draw();
  }
  out.f.reserve(sensors);
  for (int k = 0; k < sensors; ++k) {
    CVector fk(antennas);
    for (int r = 0; r < antennas; ++r) fk(r) = draw();
    out.f.push_back(std::move(fk));
  }
  return out;
}

std::vector<Violation> validate_scene(const Scene& scene) {
  std::vector<Violation> out;
  auto error = [&](std::string code, std::string message) {
    out.push_back({Severity::Error, std::move(code), std::move(message)});
  };

  if (scene.geometry.m_count < 1) error("array.m", "array needs at least one horizontal element");
  if (scene.geometry.mprime_count < 1) error("array.mprime", "array needs at least one vertical element");

  const int targets = scene.target_count();
  if (targets == 0) error("objects.targets", "scene has no target");

  bool seen_clutter = false;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const SceneObject& o = scene.objects[i];
    std::ostringstream where;
    where << "object " << i + 1;
    if (o.kind == ObjectKind::Clutter) seen_clutter = true;
    if (o.kind == ObjectKind::Target && seen_clutter) {
      error("objects.order", where.str() + ": targets must precede clutters");
    }
    if (!(o.response_power > 0.0) || !std::isfinite(o.response_power)) {
      error("objects.q", where.str() + ": response power must be positive");
    }
    if (!std::isfinite(o.azimuth_deg) || !std::isfinite(o.elevation_deg)) {
      error("objects.angle", where.str() + ": angles must be finite");
    }
  }

  if (scene.sensors.sensor_count < 1) error("sensors.k", "need at least one sensor");
  if (!(scene.sensors.alpha_max > 0.0)) error("sensors.alpha_max", "alpha_max must be positive");
  if (!(scene.sensors.sensor_noise_var > 0.0)) error("sensors.noise_var", "sensor noise variance must be positive");
  if (scene.fusion.antenna_count < 1) error("fusion.r", "fusion center needs at least one antenna");
  if (!(scene.fusion.fc_noise_var > 0.0)) error("fusion.noise_var", "fusion-center noise variance must be positive");
  if (!(scene.p_max > 0.0)) error("limits.p_max", "p_max must be positive");

  if (static_cast<int>(scene.sinr_demands.size()) != targets) {
    std::ostringstream msg;
    msg << "expected " << targets << " SINR demands, got " << scene.sinr_demands.size();
    error("demands.count", msg.str());
  }
  for (double psi : scene.sinr_demands) {
    if (!(psi > 0.0) || !std::isfinite(psi)) {
      error("demands.value", "SINR demands must be positive");
      break;
    }
  }

  const long long dims =
      static_cast<long long>(scene.sensors.sensor_count) * scene.fusion.antenna_count;
  if (scene.sensors.sensor_count >= 1 && scene.fusion.antenna_count >= 1 &&
      dims < scene.object_count()) {
    std::ostringstream msg;
    msg << "K*R = " << dims << " < N+N' = " << scene.object_count()
        << ": zero-forcing combining is not applicable";
    out.push_back({Severity::Warning, "zf.dimensions", msg.str()});
  } else if (scene.sensors.sensor_count >= 1 && scene.sensors.sensor_count < scene.object_count()) {
    std::ostringstream msg;
    msg << "K = " << scene.sensors.sensor_count << " < N+N' = " << scene.object_count()
        << ": the stacked channels span at most K dimensions, zero-forcing combining is not applicable";
    out.push_back({Severity::Warning, "zf.rank", msg.str()});
  }
  return out;
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Severity::Error; });
}

bool channels_match(const Scene& scene, const ChannelSet& channels) {
  if (channels.object_count() != scene.object_count()) return false;
  if (channels.sensor_count() != scene.sensors.sensor_count) return false;
  if (static_cast<int>(channels.f.size()) != scene.sensors.sensor_count) return false;
  return std::all_of(channels.f.begin(), channels.f.end(), [&](const CVector& fk) {
    return fk.size() == scene.fusion.antenna_count;
  });
}

void order_targets_first(Scene& scene) {
  std::stable_partition(scene.objects.begin(), scene.objects.end(),
                        [](const SceneObject& o) { return o.kind == ObjectKind::Target; });
}

}  // namespace rfsense

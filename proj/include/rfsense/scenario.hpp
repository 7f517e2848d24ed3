#pragma once

// Plain-text scenario files:
//
//   # comment
//   [array]    m = 2            mprime = 2
//   [objects]  target, 20, 40, 1        (kind, azimuth_deg, elevation_deg, q)
//   [sensors]  k = 4   alpha_max = 2   noise_var = 0.5
//   [fusion]   r = 10  noise_var = 0.5
//   [limits]   p_max = 100
//   [demands]  psi = 1, 1
//   [rng]      seed = 0             (optional section)
//
// One `key = value` per line; unknown sections/keys and duplicates are
// rejected with line/column diagnostics.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rfsense/scene.hpp"

namespace rfsense {

struct ScenarioFile {
  Scene scene;
  std::optional<std::uint64_t> seed;
};

/// Throws ParseError on malformed input and ValidationError when the parsed
/// scene has invariant violations (warnings are allowed).
ScenarioFile parse_scenario_text(std::string_view text, std::string_view origin = "<input>");
ScenarioFile parse_scenario(const std::filesystem::path& path);

std::string format_scenario(const ScenarioFile& file);

/// Explicit channel realizations, one entry per line (indices one-based):
///   g <object> <sensor> <re> <im>
///   f <sensor> <antenna> <re> <im>
/// Every entry must appear exactly once.
ChannelSet parse_channels_text(std::string_view text, const Scene& scene,
                               std::string_view origin = "<input>");
ChannelSet parse_channels(const std::filesystem::path& path, const Scene& scene);

}  // namespace rfsense

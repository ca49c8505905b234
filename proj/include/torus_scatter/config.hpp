#pragma once

// Run configuration: the JSON file consumed by every torus-scatter command.

#include "torus_scatter/ere_models.hpp"
#include "torus_scatter/torus_trajectory.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus_scatter {

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A 3D scattering length or the unitary limit ("unitarity" in JSON).
struct LengthSetting {
  bool unitarity = false;
  double value = 0.0;
  bool operator==(const LengthSetting&) const = default;
};

struct GridConfig {
  double min = 1e-3;
  double max = 1e3;
  std::size_t count = 200;
  GridSpacing spacing = GridSpacing::Log;
  bool operator==(const GridConfig&) const = default;
};

struct PoleConfig {
  double a = 0.0;
  std::optional<double> lambda;
  std::optional<double> r;
  bool operator==(const PoleConfig&) const = default;
};

struct RunConfig {
  int dimension = 3;
  LengthSetting a0;
  LengthSetting a1;
  std::optional<double> r0;      // 3D without family
  std::optional<double> r1;
  std::optional<double> sigma0;  // 2D effective areas
  std::optional<double> sigma1;
  std::optional<Family> family;
  GridConfig p_grid;
  double c1 = 1.0;
  std::map<std::string, double> tolerances;  // overrides of the defaults
  std::uint64_t seed = 0;
  std::optional<PoleConfig> poles;
  std::optional<std::size_t> ep_samples;

  bool operator==(const RunConfig&) const = default;
};

/// Known tolerance names and their defaults.
const std::map<std::string, double>& default_tolerances();

/// The configured tolerance, else the default. Throws for an unknown name.
double tolerance(const RunConfig& config, const std::string& name);

/// Parses and validates. Unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);

/// The model described by the configuration (family ranges applied).
TwoChannelModel build_model(const RunConfig& config);

std::vector<double> build_grid(const RunConfig& config);

}  // namespace torus_scatter

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "urnlab/urnlab.hpp"

namespace urnlab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitValidation = 2,
  kExitIntegrity = 3,
  kExitHashMismatch = 4,
  kExitOracle = 5,
};

/// Malformed or inconsistent configuration; the message carries the
/// location and the dotted field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigKernel = std::variant<SimonKernel, FiniteKernel>;

struct ObservableSpec {
  std::string name;
  TestFunction f;
};

struct Tolerances {
  double bridge_relative = 0.10;
  double critical_relative = 0.20;
  double covariance_relative = 0.15;
  double functional_relative = 0.15;
  double se_multiplier = 4.0;
  double ks_alpha = 0.01;
  double lln_band = 0.05;
  double min_correlation = 0.9;
  double control_band = 0.1;
  double degenerate_threshold = 0.05;
  double martingale_se = 4.0;
};

struct ValidationSettings {
  std::size_t samples = 20'000;
  std::vector<Color> grid;
  double z_tolerance = 5.0;
};

struct OracleSettings {
  std::uint32_t n = 2;
  std::string observable;
  std::uint32_t replicas = 10'000;
  std::size_t node_budget = 1'000'000;
  std::uint32_t max_depth = 8;
};

struct Config {
  ConfigKernel kernel = SimonKernel(0.5);
  CountingMeasure u0;
  std::vector<ObservableSpec> observables;
  /// Observables that also get a centered martingale tracker.
  std::vector<std::string> trackers;
  std::vector<std::uint64_t> horizons;
  std::vector<double> times;
  /// The n in the t*n time grid of the functional test; 0 when unused.
  double time_scale = 0.0;
  std::uint32_t replicas = 2;
  std::uint64_t base_seed = 0;
  std::uint32_t batch_size = 1000;
  std::vector<std::string> tests;
  Tolerances tolerances;
  ValidationSettings validation;
  OracleSettings oracle;
  std::string output_dir = "urnlab-out";

  /// Canonical form of everything that determines results. The output
  /// directory is not part of it.
  nlohmann::json canonical;

  std::string sha256() const;
  const ColorSpace space() const;
  std::size_t observable_index(const std::string& name) const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Re-derives the canonical form after a command-line override.
void apply_overrides(Config& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::uint32_t> replicas);

/// Compact JSON with sorted keys and numbers at 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = -1);

std::string format_double(double x);
std::string sha256_hex(const std::string& data);

}  // namespace urnlab::cli

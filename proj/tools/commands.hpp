#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "config.hpp"

namespace urnlab::cli {

struct CommandOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> replicas;
  std::optional<std::string> out;
  /// 0 means URNLAB_THREADS or the hardware concurrency.
  unsigned threads = 0;
};

/// Outputs from a different configuration than the one given.
class HashMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The oracle cannot handle this configuration.
class OracleInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Each returns the exit code and throws on errors; run_command maps
// exceptions to the documented codes.
int cmd_validate(const Config& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const Config& cfg, unsigned threads, std::ostream& out, std::ostream& err);
int cmd_analyze(const Config& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const Config& cfg, unsigned threads, std::ostream& out, std::ostream& err);

int run_command(const std::string& command, const CommandOptions& opt, std::ostream& out,
                std::ostream& err);

}  // namespace urnlab::cli

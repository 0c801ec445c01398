#pragma once

/// Run configuration shared by the CLI commands: flat `key = value` files with
/// `#` comments, serialization for reproducible runs, and validation.

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace apkin {

enum class Command { Analyze, Simulate, Converge };
enum class OperatorKind { Bgk, Boltzmann };
enum class InitialData { Equilibrium, NonEquilibrium };
enum class ReferenceKind { SelfFinest, Rk4 };

/// Usage / configuration error: maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::Analyze;
  std::string scheme = "all";
  double eps = 1e-6;
  std::vector<std::size_t> nx = {32};
  std::size_t nv = 32;
  double vmax = 8.0;
  double t_final = 0.05;
  double cfl = 0.5;
  OperatorKind op = OperatorKind::Bgk;
  bool penalized = false;
  InitialData init = InitialData::Equilibrium;
  std::string out = ".";
  std::uint64_t seed = 0;
  ReferenceKind reference = ReferenceKind::SelfFinest;

  bool operator==(const RunConfig&) const = default;
};

/// Applies `key = value` lines from `in` on top of `base`. Unknown keys and
/// malformed values throw ConfigError.
RunConfig parse_run_config(std::istream& in, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

/// Round-trips through parse_run_config exactly.
std::string serialize_run_config(const RunConfig& cfg);

/// Applies one `key = value` pair; shared by the file parser and the CLI
/// overrides so both have identical semantics.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Throws ConfigError on invariant violations (non-positive numerics,
/// non-increasing nx list for converge, unknown scheme name).
void validate_run_config(const RunConfig& cfg);

std::string to_string(Command c);
std::string to_string(OperatorKind k);
std::string to_string(InitialData i);
std::string to_string(ReferenceKind r);

}  // namespace apkin

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracture::cli {

/// Seed used when neither a flag, a config file nor the environment sets one.
inline constexpr std::uint64_t kDefaultSeed = 24601;
inline constexpr const char* kSeedEnvVar = "FRACTURE_SEED";

enum ExitCode : int { kOk = 0, kBoundFailed = 1, kInvalidConfig = 2 };

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fully resolved invocation. Optional fields are the ones a subcommand may
/// leave unset (budget overrides, optional geometry).
struct RunConfig {
  std::string command;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
  std::string out;
  bool csv = false;

  // zeros, torsion, capacity
  std::size_t n = 0;
  // heat-content
  double t = 0.0;
  // heat-content, rigidity, loss
  std::optional<double> length;
  std::optional<double> radius;
  // trace, torsion
  std::string domain;
  std::string start;
  std::string point;
  std::optional<double> dt;
  std::size_t max_steps = 10'000'000;
  // torsion, capacity
  std::string trace;
  std::optional<double> rho;
  // loss, constant
  std::string mode;
  // loss, constant, report
  std::string budget = "default";
  std::optional<std::size_t> n_traces;
  std::optional<std::size_t> n_points;
  std::optional<std::size_t> n_walkers;
  std::optional<double> eps_tube;
  std::optional<double> eps_shell;
  std::optional<double> window;
  std::optional<double> l_trunc;
  // kappa
  std::optional<double> ball_radius;

  nlohmann::json to_json() const;
};

/// Parses the command line. A `--config FILE` of key=value lines supplies
/// values for options absent from the command line; the seed falls back to
/// the FRACTURE_SEED environment variable and then to kDefaultSeed.
/// Returns nullopt after printing help. Throws ConfigError.
std::optional<RunConfig> parse(int argc, const char* const* argv, std::ostream& out);

/// Executes a parsed configuration and returns the exit status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse + run with error reporting; the body of the executable.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracture::cli

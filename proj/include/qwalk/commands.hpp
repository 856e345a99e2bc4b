#pragma once

// Subcommands of the qwalk tool, callable in-process. Each returns the exit
// code the executable reports and writes diagnostics to `log`.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "qwalk/nonlinearity.hpp"

namespace qwalk::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kNumericalError = 3,
  kConstructionError = 4,
};

struct EvolveOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> output_dir;
};
int cmd_evolve(const EvolveOptions& opts, std::ostream& log);

struct ZeroModeOptions {
  std::filesystem::path config;
  std::string wall = "plus";  ///< "plus", "minus" or a lattice coordinate
  std::optional<int> chirality;
  std::optional<std::filesystem::path> output_dir;
};
int cmd_zero_mode(const ZeroModeOptions& opts, std::ostream& log);

struct StabilityOptions {
  double k_min = 0.0;
  double k_max = 1.0;
  std::size_t k_count = 11;
  double theta = 0.0;
  std::optional<double> kappa;
  std::optional<double> kappa_tilde;  ///< with n_hat and m_hat
  Vec3 n_hat{0.0, 1.0, 0.0};
  Vec3 m_hat{0.0, 0.0, 1.0};
  double u_sq = 0.0;
  int chirality = 1;
  bool verify = false;
  std::optional<std::filesystem::path> output;  ///< stdout when empty
};
int cmd_stability(const StabilityOptions& opts, std::ostream& out, std::ostream& log);

/// Parses "min:max:count".
void parse_k_range(const std::string& text, StabilityOptions& opts);

struct UniformMapOptions {
  double theta = 0.0;
  double kappa = 0.0;
  std::size_t seeds = 0;  ///< > 0: also iterate the map from random seeds
  std::size_t iterations = 10000;
  double tolerance = 1e-8;
  std::uint64_t rng_seed = 1;
};
int cmd_uniform_map(const UniformMapOptions& opts, std::ostream& out, std::ostream& log);

struct SweepOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> output_dir;
  std::size_t jobs = 1;
};
int cmd_sweep(const SweepOptions& opts, std::ostream& log);

}  // namespace qwalk::cli

// qwalk: command-line front end. Run `qwalk --help` for usage.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/commands.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace {

qwalk::Vec3 to_vec3(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

}  // namespace

int main(int argc, char** argv) {
  using namespace qwalk::cli;

  CLI::App app{"Nonlinear chiral quantum walk simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QWALK_VERSION_STRING);
  std::string isa;
  app.add_option("--isa", isa, "Kernel variant: scalar or avx2 (default: best available)")
      ->check(CLI::IsMember({"scalar", "avx2"}));

  EvolveOptions evolve;
  auto* evolve_cmd = app.add_subcommand("evolve", "Evolve a wave packet and write an output bundle");
  evolve_cmd->add_option("config", evolve.config, "Configuration file (JSON)")->required();
  evolve_cmd->add_option("-o,--output", evolve.output_dir, "Output directory");

  ZeroModeOptions zero;
  auto* zero_cmd = app.add_subcommand("zero-mode", "Write lattice and continuum zero-modes");
  zero_cmd->add_option("config", zero.config, "Configuration file (only `lattice` is read)")->required();
  zero_cmd->add_option("--wall", zero.wall, "plus, minus, or a lattice coordinate");
  zero_cmd->add_option("--chirality", zero.chirality, "+1 or -1 (default: from the wall)");
  zero_cmd->add_option("-o,--output", zero.output_dir, "Output directory");

  StabilityOptions stab;
  std::string k_range;
  std::vector<double> n_hat, m_hat;
  auto* stab_cmd = app.add_subcommand("stability", "Relaxation-matrix eigenvalues over a k range");
  stab_cmd->add_option("--k-range", k_range, "min:max:count")->required();
  stab_cmd->add_option("--theta", stab.theta, "Local angle theta")->required();
  auto* kappa_opt = stab_cmd->add_option("--kappa", stab.kappa, "Nonlinearity strength");
  auto* kt_opt = stab_cmd->add_option("--kappa-tilde", stab.kappa_tilde, "Generalized strength");
  kappa_opt->excludes(kt_opt);
  stab_cmd->add_option("--n-hat", n_hat, "Rotation axis (3 numbers)")->expected(3)->needs(kt_opt);
  stab_cmd->add_option("--m-hat", m_hat, "Measurement axis (3 numbers)")->expected(3)->needs(kt_opt);
  stab_cmd->add_option("--u-sq", stab.u_sq, "Zero-mode intensity |u|^2 at the wall")->required();
  stab_cmd->add_option("--chirality", stab.chirality, "+1 or -1");
  stab_cmd->add_flag("--verify", stab.verify, "Compare against a numeric eigensolver");
  stab_cmd->add_option("-o,--output", stab.output, "CSV file (default: stdout)");

  UniformMapOptions umap;
  auto* umap_cmd = app.add_subcommand("uniform-map", "Fixed points of the uniform-field map");
  umap_cmd->add_option("--theta", umap.theta, "Rotation angle")->required();
  umap_cmd->add_option("--kappa", umap.kappa, "Nonlinearity strength")->required();
  umap_cmd->add_option("--seeds", umap.seeds, "Also iterate from this many random seeds");
  umap_cmd->add_option("--iterations", umap.iterations, "Iterations per seed");
  umap_cmd->add_option("--tolerance", umap.tolerance, "Convergence tolerance");
  umap_cmd->add_option("--rng-seed", umap.rng_seed, "Seed of the random generator");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of evolve runs");
  sweep_cmd->add_option("config", sweep.config, "Configuration file with a `sweep` section")->required();
  sweep_cmd->add_option("-o,--output", sweep.output_dir, "Output directory");
  sweep_cmd->add_option("-j,--jobs", sweep.jobs, "Parallel workers")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (!isa.empty()) qwalk::kernels::set_active(qwalk::kernels::parse_isa(isa));
    if (!k_range.empty()) parse_k_range(k_range, stab);
    if (!n_hat.empty()) stab.n_hat = to_vec3(n_hat);
    if (!m_hat.empty()) stab.m_hat = to_vec3(m_hat);
  } catch (const qwalk::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  if (evolve_cmd->parsed()) return cmd_evolve(evolve, std::cerr);
  if (zero_cmd->parsed()) return cmd_zero_mode(zero, std::cerr);
  if (stab_cmd->parsed()) return cmd_stability(stab, std::cout, std::cerr);
  if (umap_cmd->parsed()) return cmd_uniform_map(umap, std::cout, std::cerr);
  if (sweep_cmd->parsed()) return cmd_sweep(sweep, std::cerr);
  return kUsage;
}

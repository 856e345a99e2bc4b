#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "qwalk/angle_profile.hpp"
#include "qwalk/nonlinearity.hpp"
#include "qwalk/pauli.hpp"
#include "qwalk/profiles.hpp"
#include "qwalk/spinor_field.hpp"

namespace qwalk {

struct ObservableRecord {
  std::size_t t = 0;
  double norm = 0.0;
  double sx_expect = 0.0;  ///< sum psi^dagger sigma_x psi
  double overlap_plus = 0.0;   ///< |<Psi_+, psi>|^2
  double overlap_minus = 0.0;  ///< |<Psi_-, psi>|^2
  double center_of_mass = 0.0;  ///< sum x rho(x), x in [-L/2, L/2)
  long peak_site = 0;           ///< lattice coordinate of max rho
  double max_imag = 0.0;        ///< largest |Im| amplitude
  std::optional<std::vector<double>> density;  ///< psi^dagger psi per site
  std::optional<std::vector<double>> m_z;      ///< |u|^2 - |v|^2 per site
};

/// Computes the scalar observables of `state` against an optional mode pair.
ObservableRecord observe(std::size_t t, const SpinorField& state, const ZeroModePair* modes);

struct ObservableSelection {
  bool density = false;
  bool m_z = false;
  bool final_state = false;
};

/// Profile either from the two-wall constructor or explicit angles.
using ProfileSpec = std::variant<TwoWallParams, std::vector<double>>;

AngleProfile build_profile(const ProfileSpec& spec);

struct RunConfig {
  ProfileSpec profile = TwoWallParams{500, 10.0, 0.4};
  InitialStateSpec initial{};
  NonlinearitySpec nonlinearity{};
  std::size_t steps = 0;
  std::size_t record_every = 1;  ///< scalar observables every n steps (and at t = steps)
  std::size_t stride = 100;      ///< per-site snapshots every n steps
  ObservableSelection observables{};

  /// Throws ValidationError on any precondition violation.
  void validate() const;
};

struct EvolveResult {
  SpinorField final_state;
  std::size_t records = 0;
  /// Present when the profile hosts a constructible zero-mode pair.
  std::optional<ZeroModePair> modes;
};

using RecordSink = std::function<void(const ObservableRecord&)>;

/// Iterates the nonlinear walk `config.steps` times and emits records in
/// step order, starting with t = 0. Deterministic. Throws NumericalFailure
/// if NaN or Inf appears; the check runs every 1000 steps and at the end.
EvolveResult evolve(const RunConfig& config, const RecordSink& sink);

/// Evolves an explicit state on an explicit profile without observables.
SpinorField evolve_state(SpinorField state, const AngleProfile& angles,
                         const NonlinearitySpec& spec, std::size_t steps);

/// Real spinor field (one real number per component per site).
struct RealSpinor {
  std::vector<double> u;
  std::vector<double> v;

  double norm_sq() const;
  /// Sum of u*a.u + v*a.v.
  double dot(const RealSpinor& other) const;
};

/// psi = e^{i phi} (eta + i zeta) with <Psi, e^{-i phi} psi> real and >= 0.
struct PhaseDecomposition {
  double phi = 0.0;
  RealSpinor eta;
  RealSpinor zeta;
  double eta_norm = 0.0;   ///< ||eta||
  double zeta_norm = 0.0;  ///< ||zeta||

  SpinorField reconstruct() const;
};

/// Throws UndefinedPhaseError if |<Psi, psi>| < 1e-12.
PhaseDecomposition decompose(const SpinorField& state, const ZeroMode& mode);

/// Continuum Dirac problem to be discretized on a lattice of spacing dt.
struct DiracParams {
  std::function<double(double)> theta;  ///< theta(x) in continuum units
  double kappa = 0.0;
  double dt = 0.1;
  double length = 100.0;  ///< domain length X; the ring gets X/dt sites
};

struct RescaledWalk {
  AngleProfile angles;
  NonlinearitySpec nonlinearity;
  double dt;
  bool angle_warning;  ///< dt * max|theta| > 0.05
};

/// Walk whose small-step limit is the Dirac equation with the given theta and
/// kappa: per-step angle theta(x_i) dt at x_i = (i - N/2) dt and nonlinearity
/// kappa dt. States are sampled continuum amplitudes, so the lattice sum of
/// |psi|^2 dt is the continuum norm. Walking T/dt steps approximates time T.
RescaledWalk continuum_rescale(const DiracParams& params);

/// True when dt kappa max(density) exceeds 0.05 for the given sampled state.
bool nonlinear_step_too_large(const RescaledWalk& walk, const SpinorField& state);

/// Quasi-energy omega in [0, pi] of the uniform linear walk at lattice
/// momentum k: the one-step Bloch matrix has eigenvalues e^{-+i omega}.
double walk_quasienergy(double k, double theta, Ordering ordering = Ordering::Symmetrized);

/// One-step Bloch matrix of the uniform linear walk at lattice momentum k.
Mat2 bloch_matrix(double k, double theta, Ordering ordering = Ordering::Symmetrized);

struct DecayRateOptions {
  NonlinearitySpec nonlinearity{};
  std::size_t steps = 200;
  double transient_fraction = 0.1;  ///< leading share of steps excluded from the fit
  double min_r_squared = 0.99;
  double linear_limit = 1e-2;  ///< residual above this leaves the linear regime
  std::size_t min_window = 10;
};

struct DecayRateFit {
  double rate = 0.0;  ///< d log(residual) / dt; negative means decay
  std::size_t window_begin = 0;
  std::size_t window_end = 0;  ///< exclusive
  double r_squared = 0.0;
  bool left_linear_regime = false;  ///< residual crossed linear_limit
  bool poor_fit = false;            ///< no window reached min_r_squared
  std::vector<double> residuals;    ///< distance from the mode ray per step
};

/// Evolves mode + perturbation under the full nonlinear walk and fits the
/// exponential rate of the distance from the mode's ray
/// ||e^{-i phi} psi_t - <Psi, e^{-i phi} psi_t> Psi||.
DecayRateFit linearized_decay_rate(const ZeroMode& mode, const SpinorField& perturbation,
                                   const AngleProfile& angles, const DecayRateOptions& options);

/// eps * f(x) (1, -chi) / sqrt(2): the opposite-chirality partner of `mode`,
/// real, or multiplied by i when `imaginary` is set. Orthogonal to the mode.
SpinorField partner_perturbation(const ZeroMode& mode, double eps, bool imaginary);

}  // namespace qwalk

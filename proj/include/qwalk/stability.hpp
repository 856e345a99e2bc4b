#pragma once

// Local linear stability of a zero-mode against plane-wave perturbations
// e^{ikx} eta(t) with d eta/dt = -Gamma eta. An eigenvalue mu of Gamma with
// Re mu > 0 is a decaying direction.
//
// Real perturbations see
//   Gamma = i k sigma_z + i theta sigma_y + 2 kappa u^2 (chi - sigma_x)
// with eigenvalues mu_{1,2} = chi 2 kappa u^2 +- Delta,
//   Delta^2 = 4 kappa^2 u^4 - k^2 - theta^2.
// Imaginary perturbations see Gamma0 = i k sigma_z + i theta sigma_y with
// eigenvalues +-i sqrt(k^2 + theta^2).

#include <complex>
#include <string_view>

#include "qwalk/nonlinearity.hpp"
#include "qwalk/pauli.hpp"

namespace qwalk::stability {

using cplx = std::complex<double>;

struct StabilityInput {
  double k = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double u_sq = 0.0;  ///< |u(wall)|^2 of the unit-normalized zero-mode
  int chirality = 1;

  /// Throws ValidationError for u_sq < 0, non-finite fields or chirality not +-1.
  void validate() const;
};

enum class Classification { Attractor, Repeller, Neutral, Inconsistent };

std::string_view to_string(Classification c) noexcept;

struct RealChannel {
  cplx mu1;
  cplx mu2;
  cplx delta;
};

struct ImaginaryChannel {
  cplx mu3;
  cplx mu4;
};

struct StabilityReport {
  Mat2 gamma;
  cplx mu1, mu2, mu3, mu4;
  cplx delta;
  Classification classification;
};

inline constexpr double kNeutralTolerance = 1e-12;

Mat2 relaxation_matrix(const StabilityInput& input);
Mat2 imaginary_relaxation_matrix(double k, double theta);

/// Closed form; Delta is the principal square root.
RealChannel real_channel_eigenvalues(const StabilityInput& input);
ImaginaryChannel imaginary_channel_eigenvalues(double k, double theta);

/// From the signs of Re mu1 and Re mu2, with |Re mu| <= kNeutralTolerance
/// counted as zero. A single zero defers to the other sign; opposite signs are
/// reported as Inconsistent.
Classification classify(const StabilityInput& input);

StabilityReport analyze(const StabilityInput& input);

/// kappa_tilde (n x m) . x_hat = kappa_tilde (n_y m_z - n_z m_y).
/// Throws ValidationError unless both axes are unit vectors in the y-z plane.
double effective_kappa(double kappa_tilde, const Vec3& n_hat, const Vec3& m_hat);

/// Eigenvalues of a 2x2 matrix by a general complex eigensolver, independent
/// of the closed forms above.
struct EigenPair {
  cplx first;
  cplx second;
};
EigenPair eigenvalues_numeric(const Mat2& m);

/// Largest distance between closed-form and eigensolver eigenvalues over both
/// channels, pairing each closed-form value with its nearest numeric one.
double closed_form_deviation(const StabilityInput& input);

}  // namespace qwalk::stability

#include "qwalk/stability.hpp"

#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk::stability {

void StabilityInput::validate() const {
  if (!std::isfinite(k) || !std::isfinite(theta) || !std::isfinite(kappa) || !std::isfinite(u_sq)) {
    throw ValidationError("stability input must be finite");
  }
  if (u_sq < 0.0) throw ValidationError("u_sq must be non-negative");
  if (chirality != 1 && chirality != -1) throw ValidationError("chirality must be +1 or -1");
}

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::Attractor:
      return "attractor";
    case Classification::Repeller:
      return "repeller";
    case Classification::Neutral:
      return "neutral";
    case Classification::Inconsistent:
      break;
  }
  return "inconsistent";
}

Mat2 imaginary_relaxation_matrix(double k, double theta) {
  const cplx i{0.0, 1.0};
  return (i * k) * pauli::sigma_z() + (i * theta) * pauli::sigma_y();
}

Mat2 relaxation_matrix(const StabilityInput& input) {
  input.validate();
  const double g = 2.0 * input.kappa * input.u_sq;
  return imaginary_relaxation_matrix(input.k, input.theta) +
         cplx{g, 0.0} * (cplx{static_cast<double>(input.chirality), 0.0} * pauli::identity() -
                         pauli::sigma_x());
}

RealChannel real_channel_eigenvalues(const StabilityInput& input) {
  input.validate();
  const double g = 2.0 * input.kappa * input.u_sq;
  const double delta_sq = g * g - input.k * input.k - input.theta * input.theta;
  const cplx delta = std::sqrt(cplx{delta_sq, 0.0});
  const cplx centre{input.chirality * g, 0.0};
  return {centre + delta, centre - delta, delta};
}

ImaginaryChannel imaginary_channel_eigenvalues(double k, double theta) {
  const double w = std::hypot(k, theta);
  return {cplx{0.0, w}, cplx{0.0, -w}};
}

Classification classify(const StabilityInput& input) {
  const RealChannel ch = real_channel_eigenvalues(input);
  auto sign = [](double x) { return x > kNeutralTolerance ? 1 : (x < -kNeutralTolerance ? -1 : 0); };
  const int s1 = sign(ch.mu1.real());
  const int s2 = sign(ch.mu2.real());
  if (s1 > 0 && s2 > 0) return Classification::Attractor;
  if (s1 < 0 && s2 < 0) return Classification::Repeller;
  if (s1 == 0 && s2 == 0) return Classification::Neutral;
  // One zero eigenvalue (k = theta = 0) is the norm and phase direction of
  // the mode itself; the other one decides.
  if (s1 == 0 || s2 == 0) return s1 + s2 > 0 ? Classification::Attractor : Classification::Repeller;
  return Classification::Inconsistent;
}

StabilityReport analyze(const StabilityInput& input) {
  const RealChannel real = real_channel_eigenvalues(input);
  const ImaginaryChannel imag = imaginary_channel_eigenvalues(input.k, input.theta);
  return {relaxation_matrix(input), real.mu1, real.mu2, imag.mu3, imag.mu4, real.delta,
          classify(input)};
}

double effective_kappa(double kappa_tilde, const Vec3& n_hat, const Vec3& m_hat) {
  validate_axis(n_hat, "n_hat");
  validate_axis(m_hat, "m_hat");
  return kappa_tilde * cross(n_hat, m_hat).x;
}

}  // namespace qwalk::stability

#include <algorithm>
#include <cmath>

#include "qwalk/dynamics.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

RescaledWalk continuum_rescale(const DiracParams& params) {
  if (!(params.dt > 0.0) || !std::isfinite(params.dt)) throw ValidationError("dt must be positive");
  if (!(params.length > 0.0)) throw ValidationError("domain length must be positive");
  if (!params.theta) throw ValidationError("theta(x) is required");

  std::size_t sites = static_cast<std::size_t>(std::llround(params.length / params.dt));
  if (sites % 2 != 0) ++sites;
  if (sites < 2) throw ValidationError("dt too large for the domain length");

  std::vector<double> theta(sites);
  double max_theta = 0.0;
  const long half = static_cast<long>(sites / 2);
  for (std::size_t i = 0; i < sites; ++i) {
    const double x = static_cast<double>(static_cast<long>(i) - half) * params.dt;
    const double th = params.theta(x);
    max_theta = std::max(max_theta, std::abs(th));
    theta[i] = th * params.dt;
  }
  return RescaledWalk{AngleProfile(std::move(theta)),
                      NonlinearitySpec::baseline(params.kappa * params.dt), params.dt,
                      params.dt * max_theta > 0.05};
}

bool nonlinear_step_too_large(const RescaledWalk& walk, const SpinorField& state) {
  double max_density = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) max_density = std::max(max_density, state.density(i));
  return std::abs(walk.nonlinearity.kappa) * max_density > 0.05;
}

Mat2 bloch_matrix(double k, double theta, Ordering ordering) {
  const cplx left = std::polar(1.0, -k);  // u(x) <- u(x-1)
  const cplx right = std::polar(1.0, k);  // v(x) <- v(x+1)
  const Mat2 shift{{left, 0.0, 0.0, right}};
  auto rot = [](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return Mat2{{c, -s, s, c}};
  };
  if (ordering == Ordering::GaltonBoard) return shift * rot(theta);
  return rot(0.5 * theta) * shift * rot(0.5 * theta);
}

double walk_quasienergy(double k, double theta, Ordering ordering) {
  // det = 1, so the eigenvalues e^{-+i omega} have cos omega = tr / 2
  const double half_trace = 0.5 * bloch_matrix(k, theta, ordering).trace().real();
  return std::acos(std::clamp(half_trace, -1.0, 1.0));
}

}  // namespace qwalk

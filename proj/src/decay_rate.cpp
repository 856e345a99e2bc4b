#include <algorithm>
#include <cmath>

#include "qwalk/dynamics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

struct LineFit {
  double slope = 0.0;
  double r_squared = 0.0;
};

LineFit fit_log_linear(const std::vector<double>& values, std::size_t begin, std::size_t end) {
  const double n = static_cast<double>(end - begin);
  double st = 0.0, sy = 0.0;
  for (std::size_t t = begin; t < end; ++t) {
    st += static_cast<double>(t);
    sy += std::log(std::max(values[t], 1e-300));
  }
  const double mt = st / n, my = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t t = begin; t < end; ++t) {
    const double dt = static_cast<double>(t) - mt;
    const double dy = std::log(std::max(values[t], 1e-300)) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  LineFit fit;
  fit.slope = sty / stt;
  // a flat series is a perfect fit with zero slope
  if (syy <= 1e-20 * n) {
    fit.r_squared = 1.0;
  } else {
    const double ss_res = syy - fit.slope * sty;
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

double ray_distance(const SpinorField& psi, const ZeroMode& mode) {
  SpinorField aligned = psi;
  cplx along = mode.state.inner(psi);
  if (std::abs(along) >= 1e-12) {
    const PhaseDecomposition d = decompose(psi, mode);
    // e^{-i phi} psi = eta + i zeta
    for (std::size_t i = 0; i < psi.size(); ++i) {
      aligned.set(i, {d.eta.u[i], d.zeta.u[i]}, {d.eta.v[i], d.zeta.v[i]});
    }
    along = mode.state.inner(aligned);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    acc += std::norm(aligned.u(i) - along * mode.state.u(i)) +
           std::norm(aligned.v(i) - along * mode.state.v(i));
  }
  return std::sqrt(acc);
}

}  // namespace

SpinorField partner_perturbation(const ZeroMode& mode, double eps, bool imaginary) {
  const cplx factor = imaginary ? cplx{0.0, eps} : cplx{eps, 0.0};
  SpinorField out(mode.state.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.set(i, factor * mode.state.u(i), -factor * mode.state.v(i));
  }
  return out;
}

DecayRateFit linearized_decay_rate(const ZeroMode& mode, const SpinorField& perturbation,
                                   const AngleProfile& angles, const DecayRateOptions& options) {
  if (perturbation.size() != mode.state.size() || angles.size() != mode.state.size()) {
    throw DimensionError("perturbation, mode and profile must share the lattice size");
  }
  if (options.steps < 2 * options.min_window) {
    throw ValidationError("decay-rate fit needs at least twice min_window steps");
  }
  if (!(options.transient_fraction >= 0.0 && options.transient_fraction < 1.0)) {
    throw ValidationError("transient_fraction must lie in [0, 1)");
  }

  SpinorField psi = mode.state;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi.set(i, psi.u(i) + perturbation.u(i), psi.v(i) + perturbation.v(i));
  }
  const Walker walker(angles, options.nonlinearity);

  DecayRateFit fit;
  fit.residuals.reserve(options.steps + 1);
  std::size_t stop = options.steps + 1;
  for (std::size_t t = 0; t <= options.steps; ++t) {
    if (t > 0) walker.step(psi);
    const double r = ray_distance(psi, mode);
    fit.residuals.push_back(r);
    if (r > options.linear_limit) {
      fit.left_linear_regime = true;
      stop = t;
      break;
    }
  }

  std::size_t begin = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(options.transient_fraction * options.steps)));
  std::size_t end = stop;
  if (end < begin + options.min_window) {
    begin = end > options.min_window ? end - options.min_window : 0;
  }
  if (end - begin < 2) throw ValidationError("perturbation left the linear regime immediately");

  LineFit best = fit_log_linear(fit.residuals, begin, end);
  while (best.r_squared < options.min_r_squared && end - begin > options.min_window) {
    end = std::max(begin + options.min_window, begin + (end - begin) / 2);
    best = fit_log_linear(fit.residuals, begin, end);
  }
  fit.rate = best.slope;
  fit.r_squared = best.r_squared;
  fit.window_begin = begin;
  fit.window_end = end;
  fit.poor_fit = best.r_squared < options.min_r_squared;
  return fit;
}

}  // namespace qwalk

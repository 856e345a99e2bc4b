#include "qwalk/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

constexpr std::size_t kNanGuardInterval = 1000;

void check_finite(const SpinorField& state, std::size_t t) {
  if (!state.all_finite()) {
    throw NumericalFailure("non-finite amplitude detected by step " + std::to_string(t), t);
  }
}

}  // namespace

ObservableRecord observe(std::size_t t, const SpinorField& state, const ZeroModePair* modes) {
  const auto& k = kernels::active();
  ObservableRecord rec;
  rec.t = t;
  rec.norm = k.norm_sq(state.view());
  rec.sx_expect = k.sigma_x_expectation(state.view());
  if (modes != nullptr) {
    rec.overlap_plus = std::norm(modes->plus.state.inner(state));
    rec.overlap_minus = std::norm(modes->minus.state.inner(state));
  } else {
    rec.overlap_plus = std::numeric_limits<double>::quiet_NaN();
    rec.overlap_minus = std::numeric_limits<double>::quiet_NaN();
  }
  double com = 0.0;
  double peak = -1.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double rho = state.density(i);
    com += static_cast<double>(state.position(i)) * rho;
    if (rho > peak) {
      peak = rho;
      rec.peak_site = state.position(i);
    }
  }
  rec.center_of_mass = com;
  rec.max_imag = state.max_imag();
  return rec;
}

AngleProfile build_profile(const ProfileSpec& spec) {
  if (const auto* p = std::get_if<TwoWallParams>(&spec)) {
    return two_wall_profile(p->sites, p->lambda, p->theta0);
  }
  return AngleProfile(std::get<std::vector<double>>(spec));
}

void RunConfig::validate() const {
  const AngleProfile angles = build_profile(profile);
  nonlinearity.validate();
  if (record_every == 0) throw ValidationError("record_every must be >= 1");
  if (stride == 0) throw ValidationError("stride must be >= 1");
  (void)gaussian_state(initial, angles.size());
}

EvolveResult evolve(const RunConfig& config, const RecordSink& sink) {
  config.validate();
  const AngleProfile angles = build_profile(config.profile);
  EvolveResult result;
  try {
    result.modes = zero_mode_pair(angles);
  } catch (const ConstructionError&) {
    result.modes.reset();
  }
  const ZeroModePair* modes = result.modes ? &*result.modes : nullptr;

  SpinorField state = gaussian_state(config.initial, angles.size());
  const Walker walker(angles, config.nonlinearity);

  auto emit = [&](std::size_t t) {
    const bool scalar_due = t % config.record_every == 0 || t == config.steps;
    const bool snapshot_due = t % config.stride == 0;
    if (!scalar_due && !snapshot_due) return;
    ObservableRecord rec = observe(t, state, modes);
    if (snapshot_due && (config.observables.density || config.observables.m_z)) {
      const std::size_t n = state.size();
      if (config.observables.density) {
        rec.density.emplace(n);
        for (std::size_t i = 0; i < n; ++i) (*rec.density)[i] = state.density(i);
      }
      if (config.observables.m_z) {
        rec.m_z.emplace(n);
        for (std::size_t i = 0; i < n; ++i) (*rec.m_z)[i] = std::norm(state.u(i)) - std::norm(state.v(i));
      }
    }
    if (sink) sink(rec);
    ++result.records;
  };

  emit(0);
  for (std::size_t t = 1; t <= config.steps; ++t) {
    walker.step(state);
    if (t % kNanGuardInterval == 0 || t == config.steps) check_finite(state, t);
    emit(t);
  }
  result.final_state = std::move(state);
  return result;
}

SpinorField evolve_state(SpinorField state, const AngleProfile& angles,
                         const NonlinearitySpec& spec, std::size_t steps) {
  const Walker walker(angles, spec);
  for (std::size_t t = 1; t <= steps; ++t) {
    walker.step(state);
    if (t % kNanGuardInterval == 0 || t == steps) check_finite(state, t);
  }
  return state;
}

double RealSpinor::norm_sq() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * u[i] + v[i] * v[i];
  return acc;
}

double RealSpinor::dot(const RealSpinor& other) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * other.u[i] + v[i] * other.v[i];
  return acc;
}

SpinorField PhaseDecomposition::reconstruct() const {
  const cplx phase = std::polar(1.0, phi);
  SpinorField out(eta.u.size());
  for (std::size_t i = 0; i < eta.u.size(); ++i) {
    out.set(i, phase * cplx{eta.u[i], zeta.u[i]}, phase * cplx{eta.v[i], zeta.v[i]});
  }
  return out;
}

PhaseDecomposition decompose(const SpinorField& state, const ZeroMode& mode) {
  const cplx overlap = mode.state.inner(state);
  if (std::abs(overlap) < 1e-12) {
    throw UndefinedPhaseError("state is orthogonal to the zero-mode; phase undefined");
  }
  PhaseDecomposition d;
  d.phi = std::arg(overlap);
  const cplx unphase = std::polar(1.0, -d.phi);
  const std::size_t n = state.size();
  d.eta.u.resize(n);
  d.eta.v.resize(n);
  d.zeta.u.resize(n);
  d.zeta.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx u = unphase * state.u(i);
    const cplx v = unphase * state.v(i);
    d.eta.u[i] = u.real();
    d.eta.v[i] = v.real();
    d.zeta.u[i] = u.imag();
    d.zeta.v[i] = v.imag();
  }
  d.eta_norm = std::sqrt(d.eta.norm_sq());
  d.zeta_norm = std::sqrt(d.zeta.norm_sq());
  return d;
}

}  // namespace qwalk

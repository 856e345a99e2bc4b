#include "qwalk/walk.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

void require_same_length(const SpinorField& state, const AngleProfile& angles) {
  if (state.size() != angles.size()) {
    throw DimensionError("state has " + std::to_string(state.size()) + " sites but profile has " +
                         std::to_string(angles.size()));
  }
}

void apply_prestep(const kernels::KernelTable& table, FieldView f, const NonlinearitySpec& spec) {
  if (spec.kappa == 0.0) return;
  if (spec.is_baseline()) {
    table.prestep_baseline(f, spec.kappa);
  } else {
    table.prestep_general(f, spec.kappa, spec.rotation_axis.y, spec.rotation_axis.z,
                          spec.measurement_axis.y, spec.measurement_axis.z);
  }
}

}  // namespace

void shift_in_place(SpinorField& state) {
  auto right = [](std::span<double> a) { std::rotate(a.begin(), a.end() - 1, a.end()); };
  auto left = [](std::span<double> a) { std::rotate(a.begin(), a.begin() + 1, a.end()); };
  right(state.u_re());
  right(state.u_im());
  left(state.v_re());
  left(state.v_im());
}

SpinorField rotate(const SpinorField& state, const AngleProfile& angles, double scale) {
  require_same_length(state, angles);
  SpinorField out = state;
  if (scale != 0.0) kernels::active().rotate_angles(out.view(), angles.theta().data(), scale);
  return out;
}

SpinorField shift(const SpinorField& state) {
  SpinorField out = state;
  shift_in_place(out);
  return out;
}

SpinorField linear_step(const SpinorField& state, const AngleProfile& angles) {
  require_same_length(state, angles);
  const auto& k = kernels::active();
  SpinorField out = state;
  k.rotate_angles(out.view(), angles.theta().data(), 0.5);
  shift_in_place(out);
  k.rotate_angles(out.view(), angles.theta().data(), 0.5);
  return out;
}

SpinorField nonlinear_prestep(const SpinorField& state, const NonlinearitySpec& spec) {
  spec.validate();
  SpinorField out = state;
  apply_prestep(kernels::active(), out.view(), spec);
  return out;
}

SpinorField full_step(const SpinorField& state, const AngleProfile& angles,
                      const NonlinearitySpec& spec) {
  require_same_length(state, angles);
  SpinorField out = nonlinear_prestep(state, spec);
  if (spec.ordering == Ordering::GaltonBoard) {
    kernels::active().rotate_angles(out.view(), angles.theta().data(), 1.0);
    shift_in_place(out);
    return out;
  }
  return linear_step(out, angles);
}

SpinorField apply_pauli(const SpinorField& state, PauliAxis axis) {
  SpinorField out(state.size());
  const cplx i_unit{0.0, 1.0};
  for (std::size_t x = 0; x < state.size(); ++x) {
    const cplx u = state.u(x);
    const cplx v = state.v(x);
    switch (axis) {
      case PauliAxis::X:
        out.set(x, v, u);
        break;
      case PauliAxis::Y:
        out.set(x, -i_unit * v, i_unit * u);
        break;
      case PauliAxis::Z:
        out.set(x, u, -v);
        break;
    }
  }
  return out;
}

double check_chiral_symmetry(const AngleProfile& angles, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ValidationError("chiral symmetry check needs at least one trial");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    SpinorField psi(angles.size());
    for (std::size_t x = 0; x < psi.size(); ++x) {
      psi.set(x, {gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)});
    }
    psi.scale(1.0 / std::sqrt(norm(psi)));
    SpinorField chi = apply_pauli(linear_step(psi, angles), PauliAxis::X);
    chi = apply_pauli(linear_step(chi, angles), PauliAxis::X);
    worst = std::max(worst, distance(chi, psi));
  }
  return worst;
}

Walker::Walker(AngleProfile angles, NonlinearitySpec spec, const kernels::KernelTable& table)
    : angles_(std::move(angles)), spec_(spec), table_(&table) {
  spec_.validate();
  const std::size_t n = angles_.size();
  cos_half_.resize(n);
  sin_half_.resize(n);
  cos_full_.resize(n);
  sin_full_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cos_half_[i] = std::cos(0.5 * angles_[i]);
    sin_half_[i] = std::sin(0.5 * angles_[i]);
    cos_full_[i] = std::cos(angles_[i]);
    sin_full_[i] = std::sin(angles_[i]);
  }
}

void Walker::prestep(SpinorField& state) const { apply_prestep(*table_, state.view(), spec_); }

void Walker::linear_step(SpinorField& state) const {
  if (state.size() != angles_.size()) throw DimensionError("state size does not match walker");
  table_->rotate_cs(state.view(), cos_half_.data(), sin_half_.data());
  shift_in_place(state);
  table_->rotate_cs(state.view(), cos_half_.data(), sin_half_.data());
}

void Walker::step(SpinorField& state) const {
  if (state.size() != angles_.size()) throw DimensionError("state size does not match walker");
  prestep(state);
  if (spec_.ordering == Ordering::GaltonBoard) {
    table_->rotate_cs(state.view(), cos_full_.data(), sin_full_.data());
    shift_in_place(state);
  } else {
    linear_step(state);
  }
}

double prestep_jacobian_determinant(const NonlinearitySpec& spec, cplx u, cplx v, double h) {
  spec.validate();
  const auto& table = kernels::scalar_table();
  auto map = [&](const Eigen::Vector4d& p) {
    double ur = p[0], ui = p[1], vr = p[2], vi = p[3];
    apply_prestep(table, FieldView{&ur, &ui, &vr, &vi, 1}, spec);
    return Eigen::Vector4d(ur, ui, vr, vi);
  };
  const Eigen::Vector4d p0(u.real(), u.imag(), v.real(), v.imag());
  Eigen::Matrix4d jac;
  for (int c = 0; c < 4; ++c) {
    Eigen::Vector4d dp = Eigen::Vector4d::Zero();
    dp[c] = h;
    jac.col(c) = (map(p0 + dp) - map(p0 - dp)) / (2.0 * h);
  }
  return jac.determinant();
}

}  // namespace qwalk

#include "qwalk/spinor_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

namespace {

void check_sites(std::size_t sites) {
  if (sites < 2 || sites % 2 != 0) {
    throw ValidationError("lattice size must be even and >= 2, got " + std::to_string(sites));
  }
}

}  // namespace

SpinorField::SpinorField(std::size_t sites) {
  check_sites(sites);
  u_re_.assign(sites, 0.0);
  u_im_.assign(sites, 0.0);
  v_re_.assign(sites, 0.0);
  v_im_.assign(sites, 0.0);
}

SpinorField::SpinorField(std::span<const cplx> u, std::span<const cplx> v) {
  if (u.size() != v.size()) {
    throw DimensionError("spinor components differ in length");
  }
  check_sites(u.size());
  u_re_.resize(u.size());
  u_im_.resize(u.size());
  v_re_.resize(u.size());
  v_im_.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) set(i, u[i], v[i]);
}

double SpinorField::max_imag() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    m = std::max({m, std::abs(u_im_[i]), std::abs(v_im_[i])});
  }
  return m;
}

bool SpinorField::all_finite() const noexcept {
  auto finite = [](const std::vector<double>& a) {
    return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(u_re_) && finite(u_im_) && finite(v_re_) && finite(v_im_);
}

void SpinorField::scale(double factor) noexcept {
  for (auto* a : {&u_re_, &u_im_, &v_re_, &v_im_}) {
    for (double& x : *a) x *= factor;
  }
}

cplx SpinorField::inner(const SpinorField& other) const {
  if (other.size() != size()) throw DimensionError("inner product of fields of different size");
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    // conj(a) * b for both components
    re += u_re_[i] * other.u_re_[i] + u_im_[i] * other.u_im_[i] + v_re_[i] * other.v_re_[i] +
          v_im_[i] * other.v_im_[i];
    im += u_re_[i] * other.u_im_[i] - u_im_[i] * other.u_re_[i] + v_re_[i] * other.v_im_[i] -
          v_im_[i] * other.v_re_[i];
  }
  return {re, im};
}

double norm(const SpinorField& state) { return kernels::active().norm_sq(state.view()); }

double distance(const SpinorField& a, const SpinorField& b) {
  if (a.size() != b.size()) throw DimensionError("distance between fields of different size");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a.u(i) - b.u(i)) + std::norm(a.v(i) - b.v(i));
  return std::sqrt(acc);
}

}  // namespace qwalk

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qwalk/kernel_abi.hpp"

namespace qwalk {

using cplx = std::complex<double>;

/// Two-component complex amplitude (u, v) on each site of a periodic ring.
///
/// Storage is structure-of-arrays (real and imaginary parts of u and v in
/// separate contiguous buffers) so that sitewise 2x2 updates vectorize.
/// Site i sits at lattice coordinate x = i - L/2.
class SpinorField {
 public:
  SpinorField() = default;
  /// Zero field on L sites; L must be even and >= 2.
  explicit SpinorField(std::size_t sites);
  SpinorField(std::span<const cplx> u, std::span<const cplx> v);

  std::size_t size() const noexcept { return u_re_.size(); }
  long position(std::size_t site) const noexcept {
    return static_cast<long>(site) - static_cast<long>(size() / 2);
  }

  cplx u(std::size_t i) const { return {u_re_[i], u_im_[i]}; }
  cplx v(std::size_t i) const { return {v_re_[i], v_im_[i]}; }
  void set(std::size_t i, cplx u, cplx v) {
    u_re_[i] = u.real();
    u_im_[i] = u.imag();
    v_re_[i] = v.real();
    v_im_[i] = v.imag();
  }

  std::span<double> u_re() noexcept { return u_re_; }
  std::span<double> u_im() noexcept { return u_im_; }
  std::span<double> v_re() noexcept { return v_re_; }
  std::span<double> v_im() noexcept { return v_im_; }
  std::span<const double> u_re() const noexcept { return u_re_; }
  std::span<const double> u_im() const noexcept { return u_im_; }
  std::span<const double> v_re() const noexcept { return v_re_; }
  std::span<const double> v_im() const noexcept { return v_im_; }

  FieldView view() noexcept {
    return {u_re_.data(), u_im_.data(), v_re_.data(), v_im_.data(), size()};
  }
  ConstFieldView view() const noexcept {
    return {u_re_.data(), u_im_.data(), v_re_.data(), v_im_.data(), size()};
  }

  /// Local density psi^dagger psi at site i.
  double density(std::size_t i) const {
    return u_re_[i] * u_re_[i] + u_im_[i] * u_im_[i] + v_re_[i] * v_re_[i] +
           v_im_[i] * v_im_[i];
  }

  /// Largest |Im| over both components.
  double max_imag() const noexcept;
  bool all_finite() const noexcept;

  void scale(double factor) noexcept;
  /// <this, other> = sum_x this^dagger(x) other(x).
  cplx inner(const SpinorField& other) const;

  friend bool operator==(const SpinorField&, const SpinorField&) = default;

 private:
  std::vector<double> u_re_, u_im_, v_re_, v_im_;
};

/// Sum over sites of |u|^2 + |v|^2, accumulated in site order.
double norm(const SpinorField& state);

/// Euclidean distance ||a - b||.
double distance(const SpinorField& a, const SpinorField& b);

}  // namespace qwalk

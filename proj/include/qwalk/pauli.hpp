#pragma once

#include <array>
#include <complex>

namespace qwalk {

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
  std::array<std::complex<double>, 4> a{};

  constexpr std::complex<double>& operator()(int r, int c) { return a[2 * r + c]; }
  constexpr const std::complex<double>& operator()(int r, int c) const {
    return a[2 * r + c];
  }

  std::complex<double> trace() const { return a[0] + a[3]; }
  std::complex<double> det() const { return a[0] * a[3] - a[1] * a[2]; }

  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
  }
  friend Mat2 operator*(std::complex<double> s, const Mat2& x) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.a[i] = s * x.a[i];
    return r;
  }
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    return r;
  }
  std::array<std::complex<double>, 2> apply(std::complex<double> u,
                                            std::complex<double> v) const {
    return {a[0] * u + a[1] * v, a[2] * u + a[3] * v};
  }
};

enum class PauliAxis { X, Y, Z };

namespace pauli {

inline Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }

inline Mat2 matrix(PauliAxis axis) {
  using c = std::complex<double>;
  switch (axis) {
    case PauliAxis::X:
      return Mat2{{c{0, 0}, c{1, 0}, c{1, 0}, c{0, 0}}};
    case PauliAxis::Y:
      return Mat2{{c{0, 0}, c{0, -1}, c{0, 1}, c{0, 0}}};
    case PauliAxis::Z:
      break;
  }
  return Mat2{{c{1, 0}, c{0, 0}, c{0, 0}, c{-1, 0}}};
}

inline Mat2 sigma_x() { return matrix(PauliAxis::X); }
inline Mat2 sigma_y() { return matrix(PauliAxis::Y); }
inline Mat2 sigma_z() { return matrix(PauliAxis::Z); }

}  // namespace pauli
}  // namespace qwalk

// Portable reference kernels. Every other variant is tested against these.

#include <cmath>

#include "qwalk/kernel_abi.hpp"

namespace qwalk::kernels {
namespace {

void rotate_cs(FieldView f, const double* c, const double* s) {
  for (std::size_t i = 0; i < f.size; ++i) {
    const double ur = f.u_re[i], ui = f.u_im[i], vr = f.v_re[i], vi = f.v_im[i];
    f.u_re[i] = c[i] * ur - s[i] * vr;
    f.u_im[i] = c[i] * ui - s[i] * vi;
    f.v_re[i] = s[i] * ur + c[i] * vr;
    f.v_im[i] = s[i] * ui + c[i] * vi;
  }
}

void rotate_angles(FieldView f, const double* theta, double scale) {
  for (std::size_t i = 0; i < f.size; ++i) {
    const double a = scale * theta[i];
    const double c = std::cos(a), s = std::sin(a);
    const double ur = f.u_re[i], ui = f.u_im[i], vr = f.v_re[i], vi = f.v_im[i];
    f.u_re[i] = c * ur - s * vr;
    f.u_im[i] = c * ui - s * vi;
    f.v_re[i] = s * ur + c * vr;
    f.v_im[i] = s * ui + c * vi;
  }
}

void prestep_baseline(FieldView f, double kappa) {
  for (std::size_t i = 0; i < f.size; ++i) {
    const double ur = f.u_re[i], ui = f.u_im[i], vr = f.v_re[i], vi = f.v_im[i];
    const double mz = (ur * ur + ui * ui) - (vr * vr + vi * vi);
    const double a = kappa * mz;
    const double c = std::cos(a), s = std::sin(a);
    f.u_re[i] = c * ur - s * vr;
    f.u_im[i] = c * ui - s * vi;
    f.v_re[i] = s * ur + c * vr;
    f.v_im[i] = s * ui + c * vi;
  }
}

void prestep_general(FieldView f, double kappa, double n_y, double n_z, double m_y, double m_z) {
  for (std::size_t i = 0; i < f.size; ++i) {
    const double ur = f.u_re[i], ui = f.u_im[i], vr = f.v_re[i], vi = f.v_im[i];
    const double m = m_y * 2.0 * (ur * vi - ui * vr) + m_z * ((ur * ur + ui * ui) - (vr * vr + vi * vi));
    const double t = kappa * m;
    const double c = std::cos(t), s = std::sin(t);
    const double a = s * n_y, b = s * n_z;
    f.u_re[i] = c * ur - a * vr + b * ui;
    f.u_im[i] = c * ui - a * vi - b * ur;
    f.v_re[i] = c * vr + a * ur - b * vi;
    f.v_im[i] = c * vi + a * ui + b * vr;
  }
}

double norm_sq(ConstFieldView f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size; ++i) {
    acc += f.u_re[i] * f.u_re[i] + f.u_im[i] * f.u_im[i] + f.v_re[i] * f.v_re[i] +
           f.v_im[i] * f.v_im[i];
  }
  return acc;
}

double sigma_x_expectation(ConstFieldView f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size; ++i) {
    acc += 2.0 * (f.u_re[i] * f.v_re[i] + f.u_im[i] * f.v_im[i]);
  }
  return acc;
}

void sincos_array(const double* x, double* s, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

constexpr KernelTable kScalar{
    Isa::Scalar,      "scalar",          rotate_cs, rotate_angles,        prestep_baseline,
    prestep_general,  norm_sq,           sigma_x_expectation, sincos_array,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace qwalk::kernels

#pragma once

// Plain-data types shared between the library and the ISA-specific kernel
// translation units. Kept free of inline library code: the AVX2 unit is
// compiled with -mavx2 and must not emit definitions other units could pick.

#include <cstddef>
#include <string_view>

namespace qwalk {

/// Raw structure-of-arrays view handed to the arithmetic kernels.
struct FieldView {
  double* u_re;
  double* u_im;
  double* v_re;
  double* v_im;
  std::size_t size;
};

struct ConstFieldView {
  const double* u_re;
  const double* u_im;
  const double* v_re;
  const double* v_im;
  std::size_t size;
};

namespace kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;

  /// Rotate (u, v) -> (c u - s v, s u + c v) at every site.
  void (*rotate_cs)(FieldView f, const double* c, const double* s);
  /// Same rotation with angle scale * theta[i], evaluating cos/sin per site.
  void (*rotate_angles)(FieldView f, const double* theta, double scale);
  /// exp(-i kappa M_z sigma_y) with M_z = |u|^2 - |v|^2.
  void (*prestep_baseline)(FieldView f, double kappa);
  /// exp(-i kappa M (n_y sigma_y + n_z sigma_z)),
  /// M = m_y 2 Im(u* v) + m_z (|u|^2 - |v|^2).
  void (*prestep_general)(FieldView f, double kappa, double n_y, double n_z, double m_y,
                          double m_z);
  /// sum |u|^2 + |v|^2
  double (*norm_sq)(ConstFieldView f);
  /// sum psi^dagger sigma_x psi = sum 2 Re(u* v)
  double (*sigma_x_expectation)(ConstFieldView f);
  /// cos/sin of each angle; the AVX2 variant uses its own polynomial sincos.
  void (*sincos)(const double* x, double* s, double* c, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the build has no AVX2 variant.
const KernelTable* avx2_table() noexcept;

}  // namespace kernels
}  // namespace qwalk

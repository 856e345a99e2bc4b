// AVX2/FMA kernels. Compiled with -mavx2 -mfma; only reached after the
// runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include <cmath>

#include "qwalk/kernel_abi.hpp"

namespace qwalk::kernels {
namespace {

// Cephes-style sin/cos: reduction by pi/4 with a three-part constant, then
// degree-13/14 minimax polynomials on |z| <= pi/4. Lanes with |x| beyond
// kReduceLimit (or non-finite) go through libm instead.
constexpr double kReduceLimit = 1.0e8;
constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDP1 = 7.85398125648498535156e-1;
constexpr double kDP2 = 3.77489470793079817668e-8;
constexpr double kDP3 = 2.69515142907905952645e-15;

constexpr double kSin[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-8,
                            2.75573136213857245213e-6,  -1.98412698295895385996e-4,
                            8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr double kCos[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9,
                            -2.75573141792967388112e-7,  2.48015872888517045348e-5,
                            -1.38888888888730564116e-3,  4.16666666666665929218e-2};

inline __m256d poly6(__m256d zz, const double* k) {
  __m256d p = _mm256_set1_pd(k[0]);
  for (int i = 1; i < 6; ++i) p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(k[i]));
  return p;
}

inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d ax = _mm256_andnot_pd(sign_bit, x);
  const __m256d x_sign = _mm256_and_pd(sign_bit, x);

  // even octant index y = floor(ax 4/pi) rounded up to even
  const __m256d jd = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  const __m256d half_jd = _mm256_floor_pd(_mm256_mul_pd(jd, _mm256_set1_pd(0.5)));
  const __m256d y = _mm256_add_pd(jd, _mm256_fnmadd_pd(_mm256_set1_pd(2.0), half_jd, jd));

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP2), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP3), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d sin_poly = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), poly6(zz, kSin), z);
  const __m256d cos_poly = _mm256_add_pd(
      _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)),
      _mm256_mul_pd(_mm256_mul_pd(zz, zz), poly6(zz, kCos)));

  // quadrant q = (y / 2) mod 4, exact in double
  const __m256d h = _mm256_mul_pd(y, _mm256_set1_pd(0.5));
  const __m256d q = _mm256_fnmadd_pd(
      _mm256_set1_pd(4.0), _mm256_floor_pd(_mm256_mul_pd(h, _mm256_set1_pd(0.25))), h);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d swap = _mm256_or_pd(_mm256_cmp_pd(q, one, _CMP_EQ_OQ),
                                    _mm256_cmp_pd(q, three, _CMP_EQ_OQ));
  const __m256d sin_neg = _mm256_cmp_pd(q, two, _CMP_GE_OQ);
  const __m256d cos_neg = _mm256_or_pd(_mm256_cmp_pd(q, one, _CMP_EQ_OQ),
                                       _mm256_cmp_pd(q, two, _CMP_EQ_OQ));

  __m256d s = _mm256_blendv_pd(sin_poly, cos_poly, swap);
  __m256d c = _mm256_blendv_pd(cos_poly, sin_poly, swap);
  s = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign_bit));
  s = _mm256_xor_pd(s, x_sign);
  c = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign_bit));
  s_out = s;
  c_out = c;
}

// Returns false if any lane needs the libm fallback.
inline bool in_fast_range(__m256d x) {
  const __m256d ax = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
  // NaN compares false, so it is caught here as well
  const __m256d ok = _mm256_cmp_pd(ax, _mm256_set1_pd(kReduceLimit), _CMP_LE_OQ);
  return _mm256_movemask_pd(ok) == 0xF;
}

inline void sincos4_checked(__m256d x, __m256d& s, __m256d& c) {
  if (in_fast_range(x)) {
    sincos4(x, s, c);
    return;
  }
  alignas(32) double xs[4], ss[4], cs[4];
  _mm256_store_pd(xs, x);
  for (int k = 0; k < 4; ++k) {
    ss[k] = std::sin(xs[k]);
    cs[k] = std::cos(xs[k]);
  }
  s = _mm256_load_pd(ss);
  c = _mm256_load_pd(cs);
}

inline void sincos1(double x, double& s, double& c) {
  __m256d vs, vc;
  sincos4_checked(_mm256_set1_pd(x), vs, vc);
  s = _mm256_cvtsd_f64(vs);
  c = _mm256_cvtsd_f64(vc);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (u, v) <- (c u - s v, s u + c v) on four sites
inline void rotate4(FieldView f, std::size_t i, __m256d c, __m256d s) {
  const __m256d ur = _mm256_loadu_pd(f.u_re + i);
  const __m256d ui = _mm256_loadu_pd(f.u_im + i);
  const __m256d vr = _mm256_loadu_pd(f.v_re + i);
  const __m256d vi = _mm256_loadu_pd(f.v_im + i);
  _mm256_storeu_pd(f.u_re + i, _mm256_fmsub_pd(c, ur, _mm256_mul_pd(s, vr)));
  _mm256_storeu_pd(f.u_im + i, _mm256_fmsub_pd(c, ui, _mm256_mul_pd(s, vi)));
  _mm256_storeu_pd(f.v_re + i, _mm256_fmadd_pd(s, ur, _mm256_mul_pd(c, vr)));
  _mm256_storeu_pd(f.v_im + i, _mm256_fmadd_pd(s, ui, _mm256_mul_pd(c, vi)));
}

inline void rotate1(FieldView f, std::size_t i, double c, double s) {
  const double ur = f.u_re[i], ui = f.u_im[i], vr = f.v_re[i], vi = f.v_im[i];
  f.u_re[i] = c * ur - s * vr;
  f.u_im[i] = c * ui - s * vi;
  f.v_re[i] = s * ur + c * vr;
  f.v_im[i] = s * ui + c * vi;
}

void rotate_cs(FieldView f, const double* c, const double* s) {
  std::size_t i = 0;
  for (; i + 4 <= f.size; i += 4) rotate4(f, i, _mm256_loadu_pd(c + i), _mm256_loadu_pd(s + i));
  for (; i < f.size; ++i) rotate1(f, i, c[i], s[i]);
}

void rotate_angles(FieldView f, const double* theta, double scale) {
  const __m256d vscale = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= f.size; i += 4) {
    __m256d s, c;
    sincos4_checked(_mm256_mul_pd(vscale, _mm256_loadu_pd(theta + i)), s, c);
    rotate4(f, i, c, s);
  }
  for (; i < f.size; ++i) {
    double s, c;
    sincos1(scale * theta[i], s, c);
    rotate1(f, i, c, s);
  }
}

void prestep_baseline(FieldView f, double kappa) {
  const __m256d vk = _mm256_set1_pd(kappa);
  std::size_t i = 0;
  for (; i + 4 <= f.size; i += 4) {
    const __m256d ur = _mm256_loadu_pd(f.u_re + i);
    const __m256d ui = _mm256_loadu_pd(f.u_im + i);
    const __m256d vr = _mm256_loadu_pd(f.v_re + i);
    const __m256d vi = _mm256_loadu_pd(f.v_im + i);
    const __m256d uu = _mm256_fmadd_pd(ui, ui, _mm256_mul_pd(ur, ur));
    const __m256d vv = _mm256_fmadd_pd(vi, vi, _mm256_mul_pd(vr, vr));
    __m256d s, c;
    sincos4_checked(_mm256_mul_pd(vk, _mm256_sub_pd(uu, vv)), s, c);
    rotate4(f, i, c, s);
  }
  for (; i < f.size; ++i) {
    const double mz = (f.u_re[i] * f.u_re[i] + f.u_im[i] * f.u_im[i]) -
                      (f.v_re[i] * f.v_re[i] + f.v_im[i] * f.v_im[i]);
    double s, c;
    sincos1(kappa * mz, s, c);
    rotate1(f, i, c, s);
  }
}

void prestep_general(FieldView f, double kappa, double n_y, double n_z, double m_y, double m_z) {
  const __m256d vk = _mm256_set1_pd(kappa);
  const __m256d vny = _mm256_set1_pd(n_y), vnz = _mm256_set1_pd(n_z);
  const __m256d vmy2 = _mm256_set1_pd(2.0 * m_y), vmz = _mm256_set1_pd(m_z);
  std::size_t i = 0;
  for (; i + 4 <= f.size; i += 4) {
    const __m256d ur = _mm256_loadu_pd(f.u_re + i);
    const __m256d ui = _mm256_loadu_pd(f.u_im + i);
    const __m256d vr = _mm256_loadu_pd(f.v_re + i);
    const __m256d vi = _mm256_loadu_pd(f.v_im + i);
    const __m256d uu = _mm256_fmadd_pd(ui, ui, _mm256_mul_pd(ur, ur));
    const __m256d vv = _mm256_fmadd_pd(vi, vi, _mm256_mul_pd(vr, vr));
    const __m256d im_uv = _mm256_fmsub_pd(ur, vi, _mm256_mul_pd(ui, vr));
    const __m256d m = _mm256_fmadd_pd(vmy2, im_uv, _mm256_mul_pd(vmz, _mm256_sub_pd(uu, vv)));
    __m256d s, c;
    sincos4_checked(_mm256_mul_pd(vk, m), s, c);
    const __m256d a = _mm256_mul_pd(s, vny);
    const __m256d b = _mm256_mul_pd(s, vnz);
    // u' = c u - a v - i b u ;  v' = c v + a u + i b v
    _mm256_storeu_pd(f.u_re + i,
                     _mm256_fmadd_pd(b, ui, _mm256_fmsub_pd(c, ur, _mm256_mul_pd(a, vr))));
    _mm256_storeu_pd(f.u_im + i,
                     _mm256_fnmadd_pd(b, ur, _mm256_fmsub_pd(c, ui, _mm256_mul_pd(a, vi))));
    _mm256_storeu_pd(f.v_re + i,
                     _mm256_fnmadd_pd(b, vi, _mm256_fmadd_pd(c, vr, _mm256_mul_pd(a, ur))));
    _mm256_storeu_pd(f.v_im + i,
                     _mm256_fmadd_pd(b, vr, _mm256_fmadd_pd(c, vi, _mm256_mul_pd(a, ui))));
  }
  for (; i < f.size; ++i) {
    const double ur = f.u_re[i], ui = f.u_im[i], vr = f.v_re[i], vi = f.v_im[i];
    const double m = m_y * 2.0 * (ur * vi - ui * vr) + m_z * ((ur * ur + ui * ui) - (vr * vr + vi * vi));
    double s, c;
    sincos1(kappa * m, s, c);
    const double a = s * n_y, b = s * n_z;
    f.u_re[i] = c * ur - a * vr + b * ui;
    f.u_im[i] = c * ui - a * vi - b * ur;
    f.v_re[i] = c * vr + a * ur - b * vi;
    f.v_im[i] = c * vi + a * ui + b * vr;
  }
}

double norm_sq(ConstFieldView f) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= f.size; i += 4) {
    const __m256d ur = _mm256_loadu_pd(f.u_re + i);
    const __m256d ui = _mm256_loadu_pd(f.u_im + i);
    const __m256d vr = _mm256_loadu_pd(f.v_re + i);
    const __m256d vi = _mm256_loadu_pd(f.v_im + i);
    acc = _mm256_fmadd_pd(ur, ur, acc);
    acc = _mm256_fmadd_pd(ui, ui, acc);
    acc = _mm256_fmadd_pd(vr, vr, acc);
    acc = _mm256_fmadd_pd(vi, vi, acc);
  }
  double total = hsum(acc);
  for (; i < f.size; ++i) {
    total += f.u_re[i] * f.u_re[i] + f.u_im[i] * f.u_im[i] + f.v_re[i] * f.v_re[i] +
             f.v_im[i] * f.v_im[i];
  }
  return total;
}

double sigma_x_expectation(ConstFieldView f) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= f.size; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(f.u_re + i), _mm256_loadu_pd(f.v_re + i), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(f.u_im + i), _mm256_loadu_pd(f.v_im + i), acc);
  }
  double total = 2.0 * hsum(acc);
  for (; i < f.size; ++i) total += 2.0 * (f.u_re[i] * f.v_re[i] + f.u_im[i] * f.v_im[i]);
  return total;
}

void sincos_array(const double* x, double* s, double* c, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    sincos4_checked(_mm256_loadu_pd(x + i), vs, vc);
    _mm256_storeu_pd(s + i, vs);
    _mm256_storeu_pd(c + i, vc);
  }
  for (; i < n; ++i) sincos1(x[i], s[i], c[i]);
}

constexpr KernelTable kAvx2{
    Isa::Avx2,       "avx2",   rotate_cs,           rotate_angles, prestep_baseline,
    prestep_general, norm_sq,  sigma_x_expectation, sincos_array,
};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }

}  // namespace qwalk::kernels

// Eigensolver cross-check for the closed-form relaxation eigenvalues.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "qwalk/stability.hpp"

namespace qwalk::stability {

EigenPair eigenvalues_numeric(const Mat2& m) {
  Eigen::Matrix2cd a;
  a << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(a, false);
  const auto& ev = solver.eigenvalues();
  return {ev[0], ev[1]};
}

namespace {

double pair_deviation(cplx a, cplx b, const EigenPair& numeric) {
  const double direct = std::max(std::abs(a - numeric.first), std::abs(b - numeric.second));
  const double swapped = std::max(std::abs(a - numeric.second), std::abs(b - numeric.first));
  return std::min(direct, swapped);
}

}  // namespace

double closed_form_deviation(const StabilityInput& input) {
  const RealChannel real = real_channel_eigenvalues(input);
  const ImaginaryChannel imag = imaginary_channel_eigenvalues(input.k, input.theta);
  const double d_real = pair_deviation(real.mu1, real.mu2, eigenvalues_numeric(relaxation_matrix(input)));
  const double d_imag = pair_deviation(
      imag.mu3, imag.mu4, eigenvalues_numeric(imaginary_relaxation_matrix(input.k, input.theta)));
  return std::max(d_real, d_imag);
}

}  // namespace qwalk::stability

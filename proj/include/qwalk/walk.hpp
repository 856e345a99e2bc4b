#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qwalk/angle_profile.hpp"
#include "qwalk/kernels.hpp"
#include "qwalk/nonlinearity.hpp"
#include "qwalk/pauli.hpp"
#include "qwalk/spinor_field.hpp"

namespace qwalk {

/// R(phi) at every site with phi = scale * theta(x).
SpinorField rotate(const SpinorField& state, const AngleProfile& angles, double scale);

/// u(x) <- u(x-1), v(x) <- v(x+1) on the ring.
SpinorField shift(const SpinorField& state);

/// R(theta/2) S R(theta/2).
SpinorField linear_step(const SpinorField& state, const AngleProfile& angles);

/// Sitewise exp(-i kappa M n.sigma) with M measured along spec.measurement_axis.
SpinorField nonlinear_prestep(const SpinorField& state, const NonlinearitySpec& spec);

/// One step of the nonlinear walk in the ordering chosen by spec.
SpinorField full_step(const SpinorField& state, const AngleProfile& angles,
                      const NonlinearitySpec& spec);

/// Sitewise Pauli matrix applied to the spinor.
SpinorField apply_pauli(const SpinorField& state, PauliAxis axis);

/// Largest ||(sigma_x U)^2 psi - psi|| over `trials` random normalized states.
double check_chiral_symmetry(const AngleProfile& angles, std::size_t trials,
                             std::uint64_t seed = 0x5eed);

/// In-place stepper with precomputed half-angle tables and a fixed kernel table.
///
/// This is the hot path used by the time-evolution loops. `step` gives the
/// same result as full_step() up to the reassociation differences of the
/// selected kernel variant.
class Walker {
 public:
  Walker(AngleProfile angles, NonlinearitySpec spec,
         const kernels::KernelTable& table = kernels::active());

  void step(SpinorField& state) const;
  void linear_step(SpinorField& state) const;
  void prestep(SpinorField& state) const;

  const AngleProfile& angles() const noexcept { return angles_; }
  const NonlinearitySpec& spec() const noexcept { return spec_; }
  const kernels::KernelTable& table() const noexcept { return *table_; }

 private:
  AngleProfile angles_;
  NonlinearitySpec spec_;
  const kernels::KernelTable* table_;
  std::vector<double> cos_half_, sin_half_, cos_full_, sin_full_;
};

/// Shift in place: u moves one site right, v one site left.
void shift_in_place(SpinorField& state);

/// Determinant of the Jacobian of the one-site nonlinear map on R^4
/// (Re u, Im u, Re v, Im v), by central finite differences with step h.
double prestep_jacobian_determinant(const NonlinearitySpec& spec, cplx u, cplx v,
                                    double h = 1e-6);

}  // namespace qwalk

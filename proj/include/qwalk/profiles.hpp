#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qwalk/angle_profile.hpp"
#include "qwalk/spinor_field.hpp"

namespace qwalk {

enum class InitialKind {
  GaussianReal,      ///< (u0, u0)
  GaussianComplexV,  ///< (u0, i u0)
  GaussianMixed,     ///< (u0, u0 + i u0), renormalized
  Custom,            ///< explicit amplitudes
};

struct InitialStateSpec {
  InitialKind kind = InitialKind::GaussianReal;
  long center = 0;       ///< lattice coordinate x0
  double sigma = 1.0;    ///< width in sites
  SpinorField custom{};  ///< used when kind == Custom
};

/// u0(x) = exp(-(x - x0)^2 / (2 sigma^2)) with the minimum-image distance on
/// the ring, combined per `kind` and normalized so that norm() == 1.
SpinorField gaussian_state(const InitialStateSpec& spec, std::size_t sites);

/// Stationary state Psi = f(x) (1, chirality) / sqrt(2) of the linear step.
struct ZeroMode {
  SpinorField state;
  int chirality = 1;
  std::size_t wall = 0;
  double residual = 0.0;  ///< ||U Psi - Psi||
};

inline constexpr double kZeroModeTolerance = 1e-8;

/// Exact zero-mode at a domain wall from the ratio recursion
///   f(x+1) = f(x) (c(x) - chi s(x)) / (c(x+1) + chi s(x+1)),
/// c = cos(theta/2), s = sin(theta/2), seeded at the wall and grown half a
/// ring in each direction. Throws ConstructionError when the residual
/// exceeds `tolerance` (wrong chirality, walls too close).
ZeroMode lattice_zero_mode(const AngleProfile& angles, std::size_t wall, int chirality,
                           double tolerance = kZeroModeTolerance);

/// Continuum zero-mode: u(x) = exp(-chi * integral_wall^x theta), integral by the
/// trapezoidal rule over sites, returned as normalized (u, chi u).
SpinorField continuum_zero_mode(const AngleProfile& angles, std::size_t wall, int chirality);

/// |u(wall)|^2 of the normalized mode; the local intensity fed to the
/// relaxation matrix.
double wall_intensity(const ZeroMode& mode);

/// Both modes of a profile: + chirality at the wall with theta' > 0 and
/// - chirality at the wall with theta' < 0. Uses the stored wall sites of a
/// two-wall profile, or find_walls() for a custom profile.
struct ZeroModePair {
  ZeroMode plus;
  ZeroMode minus;
};
ZeroModePair zero_mode_pair(const AngleProfile& angles, double tolerance = kZeroModeTolerance);

enum class FixedPointKind { Attractive, Repulsive };

struct UniformFixedPoint {
  double alpha;       ///< in [0, 2 pi)
  double multiplier;  ///< derivative of the map, 1 - 2 kappa sin 2 alpha
  FixedPointKind kind;
};

struct UniformMapAnalysis {
  std::vector<UniformFixedPoint> points;  ///< sorted by alpha
  bool invertible;                        ///< |kappa| <= 1/2
};

/// Fixed points of alpha -> alpha + theta + kappa cos 2 alpha (mod pi), i.e.
/// solutions of cos 2 alpha = -theta / kappa in [0, 2 pi). Throws DomainError
/// for kappa == 0. Empty when |theta / kappa| > 1.
UniformMapAnalysis uniform_fixed_points(double theta, double kappa);

/// One application of the uniform map.
inline double uniform_map(double alpha, double theta, double kappa) {
  return alpha + theta + kappa * std::cos(2.0 * alpha);
}

/// Distance between angles modulo pi.
double angle_distance_mod_pi(double a, double b);

}  // namespace qwalk

#pragma once

#include <string_view>

namespace qwalk {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Order of the operators inside one time step.
enum class Ordering {
  Symmetrized,  ///< R(theta/2) S R(theta/2) after the nonlinear rotation
  GaltonBoard,  ///< S R(theta) after the nonlinear rotation
};

std::string_view to_string(Ordering ordering) noexcept;
/// Accepts "symmetrized" and "galton_board" (also "galton"); throws ValidationError.
Ordering parse_ordering(std::string_view text);

/// State-dependent rotation applied before the linear step:
/// exp(-i kappa M n.sigma) with M = psi^dagger (m.sigma) psi at each site.
///
/// Both axes lie in the y-z plane. The baseline nonlinearity uses
/// n = y (rotation) and m = z (measured spin density M_z = |u|^2 - |v|^2).
struct NonlinearitySpec {
  double kappa = 0.0;
  Vec3 rotation_axis{0.0, 1.0, 0.0};
  Vec3 measurement_axis{0.0, 0.0, 1.0};
  Ordering ordering = Ordering::Symmetrized;

  static NonlinearitySpec baseline(double kappa, Ordering ordering = Ordering::Symmetrized) {
    return NonlinearitySpec{kappa, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, ordering};
  }

  bool is_baseline() const noexcept;
  /// Throws ValidationError unless both axes are unit vectors with zero x part.
  void validate() const;

  friend bool operator==(const NonlinearitySpec&, const NonlinearitySpec&) = default;
};

/// Tolerance on |n| = 1, |m| = 1 and n_x = m_x = 0.
inline constexpr double kAxisTolerance = 1e-9;

/// Throws ValidationError if `axis` is not a unit vector in the y-z plane.
void validate_axis(const Vec3& axis, std::string_view name);

}  // namespace qwalk

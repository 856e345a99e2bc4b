#include "qwalk/nonlinearity.hpp"

#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

std::string_view to_string(Ordering ordering) noexcept {
  return ordering == Ordering::GaltonBoard ? "galton_board" : "symmetrized";
}

Ordering parse_ordering(std::string_view text) {
  if (text == "symmetrized") return Ordering::Symmetrized;
  if (text == "galton_board" || text == "galton") return Ordering::GaltonBoard;
  throw ValidationError("unknown ordering '" + std::string(text) +
                        "' (expected symmetrized or galton_board)");
}

void validate_axis(const Vec3& axis, std::string_view name) {
  if (!std::isfinite(axis.x) || !std::isfinite(axis.y) || !std::isfinite(axis.z)) {
    throw ValidationError(std::string(name) + " has non-finite components");
  }
  if (std::abs(axis.x) > kAxisTolerance) {
    throw ValidationError(std::string(name) + " must have zero x component");
  }
  if (std::abs(std::sqrt(dot(axis, axis)) - 1.0) > kAxisTolerance) {
    throw ValidationError(std::string(name) + " must be a unit vector");
  }
}

bool NonlinearitySpec::is_baseline() const noexcept {
  return rotation_axis == Vec3{0.0, 1.0, 0.0} && measurement_axis == Vec3{0.0, 0.0, 1.0};
}

void NonlinearitySpec::validate() const {
  if (!std::isfinite(kappa)) throw ValidationError("kappa must be finite");
  validate_axis(rotation_axis, "rotation axis n_hat");
  validate_axis(measurement_axis, "measurement axis m_hat");
}

}  // namespace qwalk

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qwalk/errors.hpp"
#include "qwalk/profiles.hpp"

namespace qwalk {

UniformMapAnalysis uniform_fixed_points(double theta, double kappa) {
  if (kappa == 0.0) throw DomainError("uniform map has no nonlinear fixed points at kappa = 0");
  constexpr double pi = std::numbers::pi;
  UniformMapAnalysis out{{}, std::abs(kappa) <= 0.5};
  const double ratio = -theta / kappa;
  if (std::abs(ratio) > 1.0) return out;

  const double a = std::acos(ratio);  // 2 alpha = +-a + 2 pi n
  std::vector<double> alphas{0.5 * a, pi - 0.5 * a, pi + 0.5 * a, 2.0 * pi - 0.5 * a};
  for (double& alpha : alphas) alpha = std::fmod(alpha, 2.0 * pi);
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-15; }),
               alphas.end());

  for (double alpha : alphas) {
    const double multiplier = 1.0 - 2.0 * kappa * std::sin(2.0 * alpha);
    out.points.push_back({alpha, multiplier,
                          std::abs(multiplier) < 1.0 ? FixedPointKind::Attractive
                                                     : FixedPointKind::Repulsive});
  }
  return out;
}

double angle_distance_mod_pi(double a, double b) {
  constexpr double pi = std::numbers::pi;
  double d = std::fmod(a - b, pi);
  if (d < 0.0) d += pi;
  return std::min(d, pi - d);
}

}  // namespace qwalk

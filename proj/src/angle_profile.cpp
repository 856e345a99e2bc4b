#include "qwalk/angle_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

AngleProfile::AngleProfile(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.size() < 2 || theta_.size() % 2 != 0) {
    throw ValidationError("angle profile length must be even and >= 2, got " +
                          std::to_string(theta_.size()));
  }
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    if (!std::isfinite(theta_[i]) || std::abs(theta_[i]) > std::numbers::pi) {
      throw ValidationError("theta[" + std::to_string(i) + "] outside [-pi, pi]");
    }
  }
}

std::size_t AngleProfile::site_of(long x) const noexcept {
  const long n = static_cast<long>(size());
  long i = (x + n / 2) % n;
  if (i < 0) i += n;
  return static_cast<std::size_t>(i);
}

int AngleProfile::slope_sign(std::size_t site) const noexcept {
  const std::size_t n = size();
  const double d = theta_[(site + 1) % n] - theta_[(site + n - 1) % n];
  return (d > 0.0) - (d < 0.0);
}

std::vector<AngleProfile::Wall> AngleProfile::find_walls() const {
  std::vector<Wall> walls;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    const std::size_t next = (i + 1) % n;
    if (theta_[i] == 0.0) {
      if (theta_[prev] * theta_[next] < 0.0) {
        walls.push_back({i, theta_[next] > theta_[prev] ? 1 : -1});
      }
    } else if (theta_[i] * theta_[next] < 0.0) {
      const std::size_t site = std::abs(theta_[i]) <= std::abs(theta_[next]) ? i : next;
      walls.push_back({site, theta_[next] > theta_[i] ? 1 : -1});
    }
  }
  return walls;
}

double AngleProfile::max_abs() const noexcept {
  double m = 0.0;
  for (double t : theta_) m = std::max(m, std::abs(t));
  return m;
}

bool walls_crowded(std::size_t sites, double lambda) noexcept {
  return static_cast<double>(sites) / lambda < 10.0;
}

AngleProfile two_wall_profile(std::size_t sites, double lambda, double theta0) {
  if (sites < 4 || sites % 2 != 0) {
    throw ValidationError("two-wall profile needs an even L >= 4, got " + std::to_string(sites));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("wall width lambda must be positive");
  }
  if (!(theta0 > 0.0 && theta0 < std::numbers::pi / 2)) {
    throw ValidationError("theta0 must lie in (0, pi/2)");
  }
  const double quarter = static_cast<double>(sites) / (4.0 * lambda);
  std::vector<double> theta(sites);
  const long half = static_cast<long>(sites / 2);
  for (std::size_t i = 0; i < sites; ++i) {
    const double x = static_cast<double>(static_cast<long>(i) - half);
    theta[i] = x >= 0.0 ? theta0 * std::tanh(x / lambda - quarter)
                        : -theta0 * std::tanh(x / lambda + quarter);
  }
  AngleProfile profile(std::move(theta));
  profile.params_ = TwoWallParams{sites, lambda, theta0};
  const long quarter_sites = std::lround(static_cast<double>(sites) / 4.0);
  profile.wall_plus_ = profile.site_of(quarter_sites);
  profile.wall_minus_ = profile.site_of(-quarter_sites);
  return profile;
}

}  // namespace qwalk

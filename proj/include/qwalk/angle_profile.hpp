#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qwalk {

/// Parameters of the standard two-domain tanh profile.
struct TwoWallParams {
  std::size_t sites = 0;
  double lambda = 0.0;  ///< wall width in sites
  double theta0 = 0.0;  ///< saturated angle magnitude
};

/// Rotation angle theta(x) per site of the ring.
///
/// Angles are kept in the principal range [-pi, pi]. Site i sits at lattice
/// coordinate x = i - L/2. Profiles built by two_wall_profile() carry their
/// construction parameters and the sites of the two walls.
class AngleProfile {
 public:
  AngleProfile() = default;
  explicit AngleProfile(std::vector<double> theta);

  std::size_t size() const noexcept { return theta_.size(); }
  double operator[](std::size_t i) const noexcept { return theta_[i]; }
  std::span<const double> theta() const noexcept { return theta_; }

  long position(std::size_t site) const noexcept {
    return static_cast<long>(site) - static_cast<long>(size() / 2);
  }
  /// Site index of lattice coordinate x, wrapped onto the ring.
  std::size_t site_of(long x) const noexcept;

  const std::optional<TwoWallParams>& two_wall() const noexcept { return params_; }
  /// Site of the wall where theta' > 0 (hosts the + chirality mode).
  std::optional<std::size_t> wall_plus() const noexcept { return wall_plus_; }
  /// Site of the wall where theta' < 0 (hosts the - chirality mode).
  std::optional<std::size_t> wall_minus() const noexcept { return wall_minus_; }

  /// Sites where theta changes sign between i and i+1 (mod L), reported as
  /// whichever neighbour has the smaller |theta|, together with sign(theta').
  struct Wall {
    std::size_t site;
    int slope_sign;
  };
  std::vector<Wall> find_walls() const;

  /// Sign of the centred difference theta(i+1) - theta(i-1).
  int slope_sign(std::size_t site) const noexcept;

  double max_abs() const noexcept;

 private:
  friend AngleProfile two_wall_profile(std::size_t, double, double);

  std::vector<double> theta_;
  std::optional<TwoWallParams> params_;
  std::optional<std::size_t> wall_plus_;
  std::optional<std::size_t> wall_minus_;
};

/// theta(x) = theta0 tanh(x/lambda - L/(4 lambda)) for x >= 0 and
/// -theta0 tanh(x/lambda + L/(4 lambda)) for x < 0; walls at x = +-L/4.
/// Throws ValidationError for odd L, lambda <= 0 or theta0 outside (0, pi/2).
AngleProfile two_wall_profile(std::size_t sites, double lambda, double theta0);

/// True when the walls are too wide for the ring (L / lambda < 10).
bool walls_crowded(std::size_t sites, double lambda) noexcept;

}  // namespace qwalk

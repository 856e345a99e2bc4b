#include "qwalk/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

void check_chirality(int chirality) {
  if (chirality != 1 && chirality != -1) throw ValidationError("chirality must be +1 or -1");
}

void check_wall(const AngleProfile& angles, std::size_t wall) {
  if (wall >= angles.size()) {
    throw ValidationError("wall site " + std::to_string(wall) + " outside the lattice");
  }
}

// Builds (f, chi f)/sqrt(2) from log|f| and sign(f), normalized to unit norm.
SpinorField assemble_mode(const std::vector<double>& log_mag, const std::vector<int>& sign,
                          int chirality, double cutoff) {
  const double top = *std::max_element(log_mag.begin(), log_mag.end());
  const double floor_log = std::log(cutoff);
  std::vector<double> f(log_mag.size());
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double rel = log_mag[i] - top;
    f[i] = rel < floor_log ? 0.0 : sign[i] * std::exp(rel);
    total += f[i] * f[i];
  }
  const double scale = 1.0 / std::sqrt(2.0 * total);
  SpinorField out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.set(i, f[i] * scale, chirality * f[i] * scale);
  }
  return out;
}

}  // namespace

SpinorField gaussian_state(const InitialStateSpec& spec, std::size_t sites) {
  if (spec.kind == InitialKind::Custom) {
    if (spec.custom.size() != sites) {
      throw DimensionError("custom initial state has " + std::to_string(spec.custom.size()) +
                           " sites, lattice has " + std::to_string(sites));
    }
    SpinorField out = spec.custom;
    const double n = norm(out);
    if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("custom initial state has zero norm");
    if (std::abs(n - 1.0) > 1e-12) out.scale(1.0 / std::sqrt(n));
    return out;
  }
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw ValidationError("Gaussian width sigma must be positive");
  }
  SpinorField out(sites);
  const long half = static_cast<long>(sites / 2);
  if (spec.center < -half || spec.center >= half) {
    throw ValidationError("Gaussian centre outside the lattice");
  }
  const long n = static_cast<long>(sites);
  const cplx i_unit{0.0, 1.0};
  for (std::size_t i = 0; i < sites; ++i) {
    long d = out.position(i) - spec.center;
    d = ((d + half) % n + n) % n - half;  // minimum image
    const double g = std::exp(-static_cast<double>(d * d) / (2.0 * spec.sigma * spec.sigma));
    switch (spec.kind) {
      case InitialKind::GaussianReal:
        out.set(i, g, g);
        break;
      case InitialKind::GaussianComplexV:
        out.set(i, g, i_unit * g);
        break;
      case InitialKind::GaussianMixed:
        out.set(i, g, g + i_unit * g);
        break;
      case InitialKind::Custom:
        break;
    }
  }
  out.scale(1.0 / std::sqrt(norm(out)));
  return out;
}

ZeroMode lattice_zero_mode(const AngleProfile& angles, std::size_t wall, int chirality,
                           double tolerance) {
  check_chirality(chirality);
  check_wall(angles, wall);
  const std::size_t n = angles.size();
  std::vector<double> c(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = std::cos(0.5 * angles[i]);
    s[i] = chirality * std::sin(0.5 * angles[i]);
  }

  std::vector<double> log_mag(n, 0.0);
  std::vector<int> sign(n, 1);
  auto step = [&](std::size_t from, std::size_t to, double num, double den) {
    if (num == 0.0 || den == 0.0) {
      throw ConstructionError("zero-mode recursion hit a vanishing factor",
                              std::numeric_limits<double>::infinity());
    }
    log_mag[to] = log_mag[from] + std::log(std::abs(num)) - std::log(std::abs(den));
    sign[to] = sign[from] * ((num > 0.0) == (den > 0.0) ? 1 : -1);
  };
  for (std::size_t d = 1; d <= n / 2; ++d) {
    const std::size_t to = (wall + d) % n;
    const std::size_t from = (wall + d - 1) % n;
    step(from, to, c[from] - s[from], c[to] + s[to]);
  }
  for (std::size_t d = 1; d < n / 2; ++d) {
    const std::size_t to = (wall + n - d) % n;
    const std::size_t from = (wall + n - d + 1) % n;
    step(from, to, c[from] + s[from], c[to] - s[to]);
  }

  ZeroMode mode;
  mode.state = assemble_mode(log_mag, sign, chirality, 1e-16);
  mode.chirality = chirality;
  mode.wall = wall;
  mode.residual = distance(linear_step(mode.state, angles), mode.state);
  if (!(mode.residual <= tolerance)) {
    throw ConstructionError("zero-mode residual " + std::to_string(mode.residual) +
                                " exceeds tolerance at wall site " + std::to_string(wall) +
                                " for chirality " + std::to_string(chirality),
                            mode.residual);
  }
  // On a ring the recursion with the wrong chirality grows into the mode of
  // the opposite wall, which is stationary too. Require the weight to sit
  // around the requested wall.
  double near = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = i > wall ? i - wall : wall - i;
    if (std::min(d, n - d) <= n / 4) near += mode.state.density(i);
  }
  if (near < 0.5) {
    throw ConstructionError("zero-mode of chirality " + std::to_string(chirality) +
                                " is not bound at wall site " + std::to_string(wall) +
                                " (chirality does not match the slope there)",
                            mode.residual);
  }
  return mode;
}

SpinorField continuum_zero_mode(const AngleProfile& angles, std::size_t wall, int chirality) {
  check_chirality(chirality);
  check_wall(angles, wall);
  const std::size_t n = angles.size();
  std::vector<double> log_mag(n, 0.0);
  const std::vector<int> sign(n, 1);
  for (std::size_t d = 1; d <= n / 2; ++d) {
    const std::size_t to = (wall + d) % n;
    const std::size_t from = (wall + d - 1) % n;
    log_mag[to] = log_mag[from] - chirality * 0.5 * (angles[from] + angles[to]);
  }
  for (std::size_t d = 1; d < n / 2; ++d) {
    const std::size_t to = (wall + n - d) % n;
    const std::size_t from = (wall + n - d + 1) % n;
    log_mag[to] = log_mag[from] + chirality * 0.5 * (angles[from] + angles[to]);
  }
  return assemble_mode(log_mag, sign, chirality, 0.0);
}

double wall_intensity(const ZeroMode& mode) { return std::norm(mode.state.u(mode.wall)); }

ZeroModePair zero_mode_pair(const AngleProfile& angles, double tolerance) {
  std::optional<std::size_t> plus = angles.wall_plus();
  std::optional<std::size_t> minus = angles.wall_minus();
  if (!plus || !minus) {
    for (const auto& w : angles.find_walls()) {
      if (w.slope_sign > 0 && !plus) plus = w.site;
      if (w.slope_sign < 0 && !minus) minus = w.site;
    }
  }
  if (!plus || !minus) {
    throw ConstructionError("profile lacks a pair of domain walls of opposite slope",
                            std::numeric_limits<double>::infinity());
  }
  return {lattice_zero_mode(angles, *plus, 1, tolerance),
          lattice_zero_mode(angles, *minus, -1, tolerance)};
}

}  // namespace qwalk

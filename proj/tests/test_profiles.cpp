#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles/dense_walk.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/profiles.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;

namespace {

std::vector<double> to_vec(const AngleProfile& a) { return {a.theta().begin(), a.theta().end()}; }

}  // namespace

TEST_CASE("two-wall profile shape") {
  const AngleProfile a = two_wall_profile(500, 10.0, 0.4);
  REQUIRE(a.size() == 500);
  REQUIRE(a.two_wall().has_value());
  CHECK(a.position(*a.wall_plus()) == 125);
  CHECK(a.position(*a.wall_minus()) == -125);
  CHECK(a[*a.wall_plus()] == doctest::Approx(0.0).scale(1.0));
  CHECK(a.slope_sign(*a.wall_plus()) == 1);
  CHECK(a.slope_sign(*a.wall_minus()) == -1);
  // saturates at -theta0 in the middle and +theta0 far away
  CHECK(a[a.site_of(0)] == doctest::Approx(-0.4 * std::tanh(12.5)));
  CHECK(a[a.site_of(-250)] == doctest::Approx(0.4 * std::tanh(12.5)));
  // mirror symmetry theta(-x) = theta(x)
  for (long x = -249; x < 250; ++x) CHECK(a[a.site_of(x)] == doctest::Approx(a[a.site_of(-x)]));
  CHECK(a.max_abs() <= 0.4);
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(two_wall_profile(501, 10.0, 0.4), ValidationError);
  CHECK_THROWS_AS(two_wall_profile(500, 0.0, 0.4), ValidationError);
  CHECK_THROWS_AS(two_wall_profile(500, 10.0, 0.0), ValidationError);
  CHECK_THROWS_AS(two_wall_profile(500, 10.0, 2.0), ValidationError);
  CHECK_THROWS_AS(AngleProfile(std::vector<double>{0.1, 4.0}), ValidationError);
  CHECK_THROWS_AS(AngleProfile(std::vector<double>{0.1, 0.2, 0.3}), ValidationError);
  CHECK(walls_crowded(50, 10.0));
  CHECK_FALSE(walls_crowded(500, 10.0));
}

TEST_CASE("find_walls on a custom profile") {
  std::vector<double> th(16);
  for (std::size_t i = 0; i < 16; ++i) th[i] = (i >= 4 && i < 12) ? 0.3 : -0.3;
  const AngleProfile a(th);
  const auto walls = a.find_walls();
  REQUIRE(walls.size() == 2);
  int up = 0, down = 0;
  for (const auto& w : walls) (w.slope_sign > 0 ? up : down)++;
  CHECK(up == 1);
  CHECK(down == 1);
}

TEST_CASE("gaussian initial states") {
  InitialStateSpec spec;
  spec.sigma = std::sqrt(50.0);
  const SpinorField real = gaussian_state(spec, 500);
  CHECK(norm(real) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(real.max_imag() == 0.0);
  for (std::size_t i = 0; i < 500; ++i) CHECK(real.u(i) == real.v(i));

  spec.kind = InitialKind::GaussianMixed;
  const SpinorField mixed = gaussian_state(spec, 500);
  CHECK(norm(mixed) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mixed.v(250) == mixed.u(250) * cplx(1.0, 1.0));

  spec.kind = InitialKind::GaussianComplexV;
  const SpinorField cv = gaussian_state(spec, 500);
  CHECK(cv.v(250) == cv.u(250) * cplx(0.0, 1.0));

  // minimum image: a packet at the edge wraps around
  spec.kind = InitialKind::GaussianReal;
  spec.center = -250;
  const SpinorField edge = gaussian_state(spec, 500);
  CHECK(edge.density(499) == doctest::Approx(edge.density(1)));

  spec.sigma = 0.0;
  CHECK_THROWS_AS(gaussian_state(spec, 500), ValidationError);
  spec.sigma = 1.0;
  spec.center = 250;
  CHECK_THROWS_AS(gaussian_state(spec, 500), ValidationError);
}

TEST_CASE("lattice zero-modes of the two-wall profile") {
  const AngleProfile a = two_wall_profile(500, 10.0, 0.4);
  const ZeroModePair pair = zero_mode_pair(a);
  CHECK(pair.plus.chirality == 1);
  CHECK(pair.minus.chirality == -1);
  CHECK(pair.plus.residual < 1e-12);
  CHECK(pair.minus.residual < 1e-12);
  CHECK(norm(pair.plus.state) == doctest::Approx(1.0).epsilon(1e-14));
  // sigma_x Psi = chi Psi exactly
  for (std::size_t i = 0; i < 500; ++i) {
    CHECK(pair.plus.state.v(i) == pair.plus.state.u(i));
    CHECK(pair.minus.state.v(i) == -pair.minus.state.u(i));
  }
  // mirror images of each other and orthogonal
  for (long x = -249; x < 250; ++x) {
    CHECK(std::abs(pair.plus.state.u(a.site_of(x))) ==
          doctest::Approx(std::abs(pair.minus.state.u(a.site_of(-x)))).epsilon(1e-12));
  }
  CHECK(std::abs(pair.plus.state.inner(pair.minus.state)) < 1e-12);
  // exponential localization: theta0 = 0.4 gives decay ~ e^{-0.4 |x - x_w|}
  const double ratio = pair.plus.state.density(a.site_of(145)) / pair.plus.state.density(a.site_of(135));
  CHECK(ratio == doctest::Approx(std::exp(-2.0 * 0.4 * 10.0)).epsilon(0.1));
}

TEST_CASE("wrong chirality cannot be bound at a wall") {
  const AngleProfile a = two_wall_profile(500, 10.0, 0.4);
  CHECK_THROWS_AS(lattice_zero_mode(a, *a.wall_plus(), -1), ConstructionError);
  CHECK_THROWS_AS(lattice_zero_mode(a, *a.wall_minus(), 1), ConstructionError);
  CHECK_THROWS_AS(lattice_zero_mode(a, *a.wall_plus(), 2), ValidationError);
}

TEST_CASE("uniform zero profile hosts a flat mode") {
  const AngleProfile flat(std::vector<double>(40, 0.0));
  const ZeroMode m = lattice_zero_mode(flat, 20, 1);
  CHECK(m.residual < 1e-14);
  for (std::size_t i = 0; i < 40; ++i) CHECK(m.state.density(i) == doctest::Approx(1.0 / 40.0));
}

TEST_CASE("lattice zero-mode lies in the dense eigenvalue-1 eigenspace") {
  const AngleProfile a = two_wall_profile(64, 4.0, 0.4);
  const auto u = oracle::linear_step(to_vec(a));
  const Eigen::MatrixXcd basis = oracle::unit_eigenspace(u);
  REQUIRE(basis.cols() == 2);
  const ZeroModePair pair = zero_mode_pair(a);
  CHECK(oracle::projection_norm(basis, oracle::to_vector(pair.plus.state)) > 1.0 - 1e-8);
  CHECK(oracle::projection_norm(basis, oracle::to_vector(pair.minus.state)) > 1.0 - 1e-8);

  // The sigma_x = +1 eigenvector inside the eigenspace is the + mode.
  const auto sx = oracle::sigma_x(64);
  const Eigen::MatrixXcd restricted = basis.adjoint() * sx * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(restricted);
  const Eigen::VectorXcd plus = basis * es.eigenvectors().col(1);
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(plus.dot(oracle::to_vector(pair.plus.state))) > 1.0 - 1e-8);
}

TEST_CASE("continuum zero-mode approximates the lattice mode") {
  const AngleProfile a = two_wall_profile(500, 10.0, 0.4);
  const ZeroModePair pair = zero_mode_pair(a);
  const SpinorField cont = continuum_zero_mode(a, *a.wall_plus(), 1);
  CHECK(norm(cont) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(pair.plus.state.inner(cont)) > 0.99);
  // far from the wall both decay at the saturated slope theta0
  const long w = a.position(*a.wall_plus());
  const double lat = std::log(std::abs(pair.plus.state.u(a.site_of(w + 60))) /
                              std::abs(pair.plus.state.u(a.site_of(w + 50))));
  const double con = std::log(std::abs(cont.u(a.site_of(w + 60))) / std::abs(cont.u(a.site_of(w + 50))));
  // theta = theta0 tanh(s / lambda) at distance s past the wall, not yet fully saturated at s = 50
  const double integral = 0.4 * 10.0 * (std::log(std::cosh(6.0)) - std::log(std::cosh(5.0)));
  CHECK(con == doctest::Approx(-integral).epsilon(1e-6));
  CHECK(con == doctest::Approx(-4.0).epsilon(1e-4));
  // lattice stationarity: f(s) (c(s) + s(s)) = f(s - 1) (c(s - 1) - s(s - 1)) with half angles
  auto half = [](int d) { return 0.5 * 0.4 * std::tanh(d / 10.0); };
  double expected = 0.0;
  for (int d = 51; d <= 60; ++d) {
    expected += std::log((std::cos(half(d - 1)) - std::sin(half(d - 1))) / (std::cos(half(d)) + std::sin(half(d))));
  }
  CHECK(lat == doctest::Approx(expected).epsilon(1e-9));
  const double c = std::cos(0.2), s = std::sin(0.2);
  CHECK(lat == doctest::Approx(10.0 * std::log((c - s) / (c + s))).epsilon(1e-4));
}

TEST_CASE("wall intensity is the density of u at the wall") {
  const AngleProfile a = two_wall_profile(500, 10.0, 0.4);
  const ZeroModePair pair = zero_mode_pair(a);
  const double u2 = wall_intensity(pair.plus);
  CHECK(u2 == doctest::Approx(0.5 * pair.plus.state.density(*a.wall_plus())));
  CHECK(u2 > 0.01);
  CHECK(u2 < 0.5);
}

TEST_CASE("uniform map fixed points") {
  const UniformMapAnalysis r = uniform_fixed_points(0.2, 0.3);
  CHECK(r.invertible);
  REQUIRE(r.points.size() == 4);
  int attractive = 0;
  for (const auto& p : r.points) {
    CHECK(std::cos(2.0 * p.alpha) == doctest::Approx(-0.2 / 0.3));
    CHECK(p.multiplier == doctest::Approx(1.0 - 0.6 * std::sin(2.0 * p.alpha)));
    CHECK(uniform_map(p.alpha, 0.2, 0.3) == doctest::Approx(p.alpha));
    if (p.kind == FixedPointKind::Attractive) {
      ++attractive;
      CHECK(std::abs(p.multiplier) < 1.0);
    }
    CHECK(p.alpha >= 0.0);
    CHECK(p.alpha < 2.0 * std::numbers::pi);
  }
  CHECK(attractive == 2);

  CHECK(uniform_fixed_points(0.4, 0.3).points.empty());
  CHECK_FALSE(uniform_fixed_points(0.2, 0.8).invertible);
  CHECK_THROWS_AS(uniform_fixed_points(0.2, 0.0), DomainError);
  CHECK(angle_distance_mod_pi(0.1, 0.1 + std::numbers::pi) == doctest::Approx(0.0).scale(1.0));
}

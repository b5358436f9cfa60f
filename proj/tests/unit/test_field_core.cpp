#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "nlsctl/errors.hpp"
#include "nlsctl/norms.hpp"
#include "nlsctl/spectral.hpp"

using namespace nlsctl;
using nlsctl::testing::random_field;

namespace {

ComplexField plane_wave(const SpatialGrid& grid, int mode) {
  ComplexField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f[i] = std::polar(1.0, grid.wavenumber(static_cast<std::size_t>(mode)) * grid.coordinate(i, 0));
  }
  return f;
}

Trajectory constant_trajectory(const ComplexField& f, const TimeGrid& time) {
  Trajectory traj(f.grid);
  traj.time = time;
  traj.node_index = Trajectory::stored_nodes(time.steps, 1);
  traj.fields.assign(time.nodes(), f);
  return traj;
}

}  // namespace

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(SpatialGrid(3, 16, 1.0), ValidationError);
  CHECK_THROWS_AS(SpatialGrid(1, 4, 1.0), ValidationError);
  CHECK_THROWS_AS(SpatialGrid(1, 24, 1.0), ValidationError);
  CHECK_THROWS_AS(SpatialGrid(1, 16, 0.0), ValidationError);
  CHECK_THROWS_AS(SpatialGrid(1, 16, -2.0), ValidationError);
  const SpatialGrid g(2, 8, 4.0);
  CHECK(g.size() == 64);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.cell_volume() == doctest::Approx(0.25));
}

TEST_CASE("field length must match grid") {
  const SpatialGrid g(1, 16, 1.0);
  CHECK_THROWS_AS(ComplexField(g, std::vector<Complex>(15)), ShapeError);
}

TEST_CASE("lp_norm examples") {
  const SpatialGrid g(1, 64, 2.0 * std::numbers::pi);
  ComplexField zero(g);
  CHECK(lp_norm(zero, 2.0) == 0.0);

  ComplexField one(g, std::vector<Complex>(g.size(), 1.0));
  CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(lp_norm(one, kInfinity) == 1.0);

  // The integral of exp(-2x^2) over R is sqrt(pi/2); a box of length 40
  // with 1024 points makes both truncation and quadrature error negligible.
  const SpatialGrid wide(1, 1024, 40.0);
  const ComplexField gauss = nlsctl::testing::wave_packet(wide, 0.0, 1.0);
  CHECK(std::abs(lp_norm(gauss, 2.0) - std::pow(std::numbers::pi / 2.0, 0.25)) < 1e-8);
}

TEST_CASE("lp_norm rejects non-finite fields") {
  const SpatialGrid g(1, 16, 1.0);
  ComplexField f(g);
  f[3] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(lp_norm(f, 2.0), InvalidFieldError);
  f[3] = Complex(0.0, INFINITY);
  CHECK_THROWS_AS(lp_norm(f, kInfinity), InvalidFieldError);
}

TEST_CASE("l2_inner properties") {
  const SpatialGrid g(1, 64, 2.0 * std::numbers::pi);
  const auto f = random_field(g, 1);
  const auto h = random_field(g, 2);

  const Complex ff = l2_inner(f, f);
  CHECK(std::abs(ff.imag()) < 1e-12);
  CHECK(ff.real() == doctest::Approx(std::pow(lp_norm(f, 2.0), 2)).epsilon(1e-12));

  CHECK(std::abs(l2_inner(plane_wave(g, 3), plane_wave(g, 5))) < 1e-10);

  const Complex a = l2_inner(f, h), b = l2_inner(h, f);
  CHECK(std::abs(a - std::conj(b)) < 1e-12);

  const SpatialGrid other(1, 32, 2.0 * std::numbers::pi);
  CHECK_THROWS_AS(l2_inner(f, ComplexField(other)), ShapeError);
}

TEST_CASE("free_propagate examples") {
  const SpatialGrid g(1, 64, 2.0 * std::numbers::pi);
  const auto f = random_field(g, 3);

  const auto same = free_propagate(f, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(same[i] - f[i]) < 1e-14);

  const int mode = 4;
  const double k = g.wavenumber(mode);
  const double t = 0.37;
  const auto moved = free_propagate(plane_wave(g, mode), t);
  const auto expect = plane_wave(g, mode);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(moved[i] - expect[i] * std::polar(1.0, k * k * t)) < 1e-12);
  }

  const auto ab = free_propagate(free_propagate(f, 0.3), 0.45);
  const auto c = free_propagate(f, 0.75);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(ab[i] - c[i]) < 1e-12);
}

TEST_CASE("free_propagate solves i v_t = v_xx") {
  // Central difference in time against the spectral Laplacian.
  const SpatialGrid g(1, 64, 2.0 * std::numbers::pi);
  const auto f = nlsctl::testing::wave_packet(g, 0.0, 0.8, 2.0);
  const double h = 1e-5;
  auto dt = free_propagate(f, h) - free_propagate(f, -h);
  dt *= Complex(0.0, 1.0 / (2.0 * h));
  const auto lap = spectral_laplacian(f);
  CHECK(lp_norm(dt - lap, 2.0) < 1e-5 * lp_norm(lap, 2.0));
}

TEST_CASE("Parseval with the unscaled forward transform") {
  for (int d : {1, 2}) {
    const SpatialGrid g(d, 32, 5.0);
    ComplexField f(g);
    std::mt19937_64 rng(11 + d);
    std::normal_distribution<double> n;
    for (auto& v : f.values) v = Complex(n(rng), n(rng));
    ComplexField hat = f;
    fft_forward(hat.values, g);
    double spec = 0.0;
    for (const auto& v : hat.values) spec += std::norm(v);
    const double lhs = std::pow(lp_norm(f, 2.0), 2);
    const double rhs = spec * g.cell_volume() / static_cast<double>(g.size());
    CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);

    ComplexField back = hat;
    fft_inverse(back.values, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(back[i] - f[i]) < 1e-12);
  }
}

TEST_CASE("free flow is unitary for t in [0, 10]") {
  for (int d : {1, 2}) {
    const SpatialGrid g(d, 32, 8.0);
    const auto f = random_field(g, 21);
    const auto h = random_field(g, 22);
    const double n0 = lp_norm(f, 2.0);
    const Complex ip = l2_inner(f, h);
    for (double t = 0.0; t <= 10.0; t += 0.625) {
      const auto ft = free_propagate(f, t);
      CHECK(std::abs(lp_norm(ft, 2.0) - n0) <= 1e-12 * n0);
      CHECK(std::abs(l2_inner(ft, free_propagate(h, t)) - ip) < 1e-10);
    }
  }
}

TEST_CASE("spectral derivative of a resolved mode") {
  const SpatialGrid g(2, 16, 2.0 * std::numbers::pi);
  ComplexField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    f[i] = std::sin(2.0 * g.coordinate(i, 0)) * std::cos(3.0 * g.coordinate(i, 1));
  }
  const auto dx = spectral_derivative(f, 0);
  const auto dy = spectral_derivative(f, 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i, 0), y = g.coordinate(i, 1);
    CHECK(std::abs(dx[i] - 2.0 * std::cos(2.0 * x) * std::cos(3.0 * y)) < 1e-12);
    CHECK(std::abs(dy[i] + 3.0 * std::sin(2.0 * x) * std::sin(3.0 * y)) < 1e-12);
  }
}

TEST_CASE("trajectory_norm examples") {
  const SpatialGrid g(1, 64, 16.0);
  const auto f = nlsctl::testing::wave_packet(g, 0.0, 1.5, 1.0);
  const TimeGrid time{0.8, 40};

  SUBCASE("constant in time") {
    const auto traj = constant_trajectory(f, time);
    for (double q : {1.0, 2.0, 4.0, 8.0}) {
      for (double p : {2.0, 4.0, 6.0}) {
        const double v = trajectory_norm(traj, norm_kind::LqLp{q, p, false});
        CHECK(v == doctest::Approx(std::pow(0.8, 1.0 / q) * lp_norm(f, p)).epsilon(1e-12));
      }
    }
    CHECK(trajectory_norm(traj, norm_kind::TerminalL2{}) == doctest::Approx(lp_norm(f, 2.0)));
  }
  SUBCASE("zero trajectory") {
    const auto traj = constant_trajectory(ComplexField(g), time);
    CHECK(trajectory_norm(traj, norm_kind::LqLp{4.0, 4.0, false}) == 0.0);
    CHECK(trajectory_norm(traj, norm_kind::LocalSmoothing{}) == 0.0);
  }
  SUBCASE("free flow in L^inf L^2") {
    Trajectory traj(g);
    traj.time = time;
    traj.node_index = Trajectory::stored_nodes(time.steps, 1);
    for (std::size_t k = 0; k < time.nodes(); ++k) traj.fields.push_back(free_propagate(f, time.time(k)));
    CHECK(std::abs(trajectory_norm(traj, norm_kind::LqLp{kInfinity, 2.0, false}) - lp_norm(f, 2.0)) < 1e-10);
  }
  SUBCASE("local smoothing equals the direct weighted computation") {
    const auto traj = constant_trajectory(f, time);
    ComplexField w = f;
    apply_fourier_multiplier(w, [&](std::size_t i) { return std::pow(1.0 + g.wavenumber_sq(i), 0.25); });
    for (std::size_t i = 0; i < g.size(); ++i) w[i] /= std::sqrt(1.0 + g.distance_sq_to_center(i));
    CHECK(trajectory_norm(traj, norm_kind::LocalSmoothing{}) ==
          doctest::Approx(std::sqrt(0.8) * lp_norm(w, 2.0)).epsilon(1e-12));
  }
  SUBCASE("needs two nodes") {
    Trajectory one(g);
    one.time = time;
    one.node_index = {0};
    one.fields = {f};
    CHECK_THROWS_AS(trajectory_norm(one, norm_kind::TerminalL2{}), ShapeError);
  }
}

TEST_CASE("norm selector validation") {
  // d = 1: (q, p) = (4, inf) and (8, 4) are admissible, (4, 4) is not.
  CHECK_NOTHROW(validate_norm_spec(norm_kind::LqLp{4.0, kInfinity, true}, 1));
  CHECK_NOTHROW(validate_norm_spec(norm_kind::LqLp{8.0, 4.0, true}, 1));
  CHECK_THROWS_AS(validate_norm_spec(norm_kind::LqLp{4.0, 4.0, true}, 1), ValidationError);
  CHECK_NOTHROW(validate_norm_spec(norm_kind::LqLp{4.0, 4.0, false}, 1));
  // d = 2: (q, p) = (4, 4).
  CHECK_NOTHROW(validate_norm_spec(norm_kind::LqLp{4.0, 4.0, true}, 2));
  CHECK_NOTHROW(validate_norm_spec(norm_kind::LocalSmoothing{-0.5, 1.0}, 1));
  CHECK_THROWS_AS(validate_norm_spec(norm_kind::LocalSmoothing{1.0, -1.0}, 1), ValidationError);

  const SpatialGrid g(1, 16, 4.0);
  const auto traj = constant_trajectory(ComplexField(g), TimeGrid{1.0, 4});
  CHECK_THROWS_AS(trajectory_norm(traj, norm_kind::LqLp{4.0, 4.0, true}), ValidationError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nlsctl/errors.hpp"
#include "nlsctl/noise.hpp"
#include "nlsctl/spectral.hpp"

using namespace nlsctl;
using namespace nlsctl::testing;

TEST_CASE("noise model validation") {
  NoiseModel m = constant_noise(2);
  CHECK_NOTHROW(m.validate(1));
  CHECK(m.constant_profiles());

  m.mu[1] = Complex(0.1, 0.2);
  CHECK_THROWS_AS(m.validate(1), ValidationError);
  m.conservative = false;
  CHECK_NOTHROW(m.validate(1));

  NoiseModel short_profiles = constant_noise(2);
  short_profiles.profiles.pop_back();
  CHECK_THROWS_AS(short_profiles.validate(1), ValidationError);

  NoiseModel weak_decay;
  weak_decay.mu = {Complex(0.0, 1.0)};
  weak_decay.profiles = {NoiseProfile::bump(1.0, {0.0}, 1.5)};
  CHECK_THROWS_AS(weak_decay.validate(1), ValidationError);
  NoiseModel wrong_axes;
  wrong_axes.mu = {Complex(0.0, 1.0)};
  wrong_axes.profiles = {NoiseProfile::bump(1.0, {0.0, 0.0})};
  CHECK_THROWS_AS(wrong_axes.validate(1), ValidationError);
}

TEST_CASE("sample_path basics") {
  const NoiseModel m = constant_noise(3);
  const auto a = sample_path(m, 0.5, 50, 42);
  CHECK(a.channels == 3);
  CHECK(a.beta.size() == 51 * 3);
  for (std::size_t j = 0; j < 3; ++j) CHECK(a.at(0, j) == 0.0);

  const auto b = sample_path(m, 0.5, 50, 42);
  CHECK(a.beta == b.beta);
  const auto c = sample_path(m, 0.5, 50, 43);
  CHECK(a.beta != c.beta);

  CHECK_THROWS_AS(sample_path(m, 0.5, 0, 1), InvalidDiscretizationError);
  CHECK_THROWS_AS(sample_path(m, 0.0, 10, 1), InvalidDiscretizationError);
}

TEST_CASE("terminal variance of beta_1 over 1e5 paths") {
  // Var of the sample variance of N(0, T) is 2 T^2 / (n - 1); a 3 sigma band.
  const NoiseModel m = constant_noise(1);
  const double t = 0.7;
  const std::size_t n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = sample_path(m, t, 4, derive_seed(9, i)).at(4, 0);
    sum += b;
    sum_sq += b * b;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  CHECK(std::abs(var - t) <= 3.0 * std::sqrt(2.0 * t * t / n));
}

TEST_CASE("Brownian bridge refinement keeps coarse nodes") {
  const NoiseModel m = constant_noise(2);
  const auto coarse = sample_path(m, 1.0, 16, 5);
  const auto fine = refine_path(coarse, 6);
  CHECK(fine.time.steps == 32);
  for (std::size_t k = 0; k <= 16; ++k) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(fine.at(2 * k, j) == coarse.at(k, j));
  }
  const auto again = refine_path(coarse, 6);
  CHECK(fine.beta == again.beta);
}

TEST_CASE("bridge midpoints have variance dt/4") {
  const NoiseModel m = constant_noise(1);
  const std::size_t n = 40000;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto coarse = sample_path(m, 1.0, 1, derive_seed(1, i));
    const auto fine = refine_path(coarse, derive_seed(2, i));
    const double dev = fine.at(1, 0) - 0.5 * coarse.at(1, 0);
    sum_sq += dev * dev;
  }
  const double var = sum_sq / n;
  CHECK(std::abs(var - 0.25) <= 3.0 * std::sqrt(2.0 * 0.25 * 0.25 / n));
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("gauge factors") {
  const SpatialGrid g(1, 64, 16.0);
  SUBCASE("zero path gives the constant 1") {
    const NoiseModel m = constant_noise(2);
    WienerPath path;
    path.time = TimeGrid{1.0, 4};
    path.channels = 2;
    path.beta.assign(5 * 2, 0.0);
    const PhaseField phase(g, m, path);
    for (std::size_t k = 0; k <= 4; ++k) {
      const auto e = gauge_factor(phase, k, 1);
      for (const auto& z : e.values) CHECK(z == Complex(1.0, 0.0));
    }
  }
  SUBCASE("inverse and unimodular in the conservative case") {
    const NoiseModel m = bump_noise(g);
    const PhaseField phase(g, m, sample_path(m, 1.0, 20, 3));
    double max_re = 0.0;
    for (std::size_t k = 0; k <= 20; ++k) {
      const auto plus = gauge_factor(phase, k, 1);
      const auto minus = gauge_factor(phase, k, -1);
      const auto w = phase.field(k);
      for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(plus[i] * minus[i] - 1.0) < 1e-14);
        CHECK(std::abs(std::abs(plus[i]) - 1.0) < 1e-14);
        max_re = std::max(max_re, std::abs(w[i].real()));
      }
    }
    CHECK(max_re < 1e-14);
  }
  SUBCASE("mu profile") {
    NoiseModel m;
    m.mu = {Complex(0.0, 0.6), Complex(0.0, -0.8)};
    m.profiles = {NoiseProfile::constant(2.0), NoiseProfile::constant(0.5)};
    const PhaseField phase(g, m, sample_path(m, 1.0, 4, 1));
    // 0.5 * (0.36 * 4 + 0.64 * 0.25)
    for (double v : phase.mu_profile()) CHECK(v == doctest::Approx(0.8));
  }
  SUBCASE("channel mismatch") {
    const NoiseModel m = constant_noise(2);
    CHECK_THROWS_AS(PhaseField(g, m, sample_path(constant_noise(1), 1.0, 4, 1)), ShapeError);
  }
}

TEST_CASE("lower order coefficients") {
  const SpatialGrid g(1, 128, 24.0);
  SUBCASE("constant profiles vanish") {
    const NoiseModel m = constant_noise(2);
    const PhaseField phase(g, m, sample_path(m, 1.0, 8, 1));
    const auto lo = lower_order_coeffs(phase, 5);
    REQUIRE(lo.b.size() == 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(lo.b[0][i] == Complex(0.0));
      CHECK(lo.c[i] == Complex(0.0));
    }
  }
  SUBCASE("bump at t = 0 vanishes") {
    const NoiseModel m = bump_noise(g);
    const PhaseField phase(g, m, sample_path(m, 1.0, 8, 1));
    const auto lo = lower_order_coeffs(phase, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(lo.b[0][i]) == 0.0);
      CHECK(std::abs(lo.c[i]) == 0.0);
    }
  }
  SUBCASE("c - Laplacian(W) equals sum (b_j / 2)^2") {
    for (int d : {1, 2}) {
      const SpatialGrid grid(d, d == 1 ? 128 : 32, 24.0);
      NoiseModel m;
      m.mu = {Complex(0.0, 0.7)};
      m.profiles = {NoiseProfile::bump(1.3, std::vector<double>(d, grid.center() + 1.0), 2.0)};
      const PhaseField phase(grid, m, sample_path(m, 1.0, 8, 17));
      const auto lo = lower_order_coeffs(phase, 8);
      const auto lap = spectral_laplacian(phase.field(8));
      for (std::size_t i = 0; i < grid.size(); ++i) {
        Complex sq = 0.0;
        for (int a = 0; a < d; ++a) sq += 0.25 * lo.b[static_cast<std::size_t>(a)][i] * lo.b[static_cast<std::size_t>(a)][i];
        CHECK(std::abs(lo.c[i] - lap[i] - sq) < 1e-10);
      }
    }
  }
}

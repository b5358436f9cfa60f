#pragma once

// Shared problem builders for unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nlsctl/forward.hpp"
#include "nlsctl/grid.hpp"
#include "nlsctl/noise.hpp"
#include "nlsctl/objective.hpp"

namespace nlsctl::testing {

inline RealField gaussian_field(const SpatialGrid& grid, double shift, double width,
                                double amplitude = 1.0) {
  RealField out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) {
      const double z = grid.coordinate(i, a) - grid.center() - shift;
      r2 += z * z;
    }
    out[i] = amplitude * std::exp(-r2 / (width * width));
  }
  return out;
}

/// Gaussian wave packet exp(-|x - c - shift|^2 / width^2) e^{i k0 x_0}.
inline ComplexField wave_packet(const SpatialGrid& grid, double shift = 0.0, double width = 1.0,
                                double k0 = 0.0, double amplitude = 1.0) {
  ComplexField f(grid);
  const auto g = gaussian_field(grid, shift, width, amplitude);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f[i] = g[i] * std::polar(1.0, k0 * (grid.coordinate(i, 0) - grid.center()));
  }
  return f;
}

inline ComplexField random_field(const SpatialGrid& grid, std::uint64_t seed,
                                 double envelope_width = 2.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto env = gaussian_field(grid, 0.0, envelope_width);
  ComplexField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = env[i] * Complex(normal(rng), normal(rng));
  return f;
}

inline ControlPath smooth_control(const TimeGrid& time, std::size_t channels, double scale,
                                  double phase = 0.0) {
  ControlPath u = ControlPath::zeros(time, channels);
  for (std::size_t k = 0; k < time.nodes(); ++k) {
    for (std::size_t j = 0; j < channels; ++j) {
      u.at(k, j) = scale * std::sin(3.0 * time.time(k) + phase + static_cast<double>(j));
    }
  }
  return u;
}

inline NoiseModel constant_noise(std::size_t channels, double strength = 0.5) {
  NoiseModel model;
  for (std::size_t j = 0; j < channels; ++j) {
    model.mu.emplace_back(0.0, strength / static_cast<double>(j + 1));
    model.profiles.push_back(NoiseProfile::constant(1.0));
  }
  model.conservative = true;
  return model;
}

inline NoiseModel bump_noise(const SpatialGrid& grid, double strength = 0.5) {
  NoiseModel model;
  model.mu = {Complex(0.0, strength), Complex(0.0, 0.5 * strength)};
  model.profiles = {NoiseProfile::bump(1.0, {grid.center() - 1.0}, 2.0),
                    NoiseProfile::bump(0.7, {grid.center() + 1.5}, 3.0)};
  model.conservative = true;
  return model;
}

/// Cubic defocusing 1-D model with Gaussian control potentials.
inline ModelParams cubic_model(const SpatialGrid& grid, std::size_t controls, int lambda = -1,
                               double alpha = 3.0) {
  ModelParams params;
  params.lambda = lambda;
  params.alpha = alpha;
  params.v0 = gaussian_field(grid, 0.0, 4.0, 0.2);
  for (std::size_t j = 0; j < controls; ++j) {
    params.v.push_back(gaussian_field(grid, 1.0 - 2.0 * static_cast<double>(j), 1.0));
  }
  return params;
}

/// The desk-scale tracking problem used as the optimizer regression fixture:
/// d=1, n=64, cubic defocusing, one Gaussian control potential, K=[-1,1].
/// The terminal target comes from a controlled run, the tracking target from
/// the uncontrolled run, and four conservative Wiener paths are drawn from
/// `base_seed`.
struct ReferenceProblem {
  ControlProblem problem;
  ControlPath u0;
};

inline constexpr std::uint64_t kReferenceSeed = 20240917;

inline ReferenceProblem reference_tracking_problem(std::uint64_t base_seed = kReferenceSeed,
                                                   std::size_t paths = 4) {
  const SpatialGrid grid(1, 64, 16.0);
  const TimeGrid time{1.0, 200};
  const TimeGrid control_time{1.0, 20};

  ModelParams params = cubic_model(grid, 1);
  params.admissible = AdmissibleSet::box({-1.0}, {1.0});

  const ComplexField x0 = wave_packet(grid, -1.0, 1.2, 1.0);
  const ControlPath u_target = smooth_control(control_time, 1, 0.8);
  const ControlPath u_zero = ControlPath::zeros(control_time, 1);

  ControlProblem problem{
      .x0 = x0,
      .params = params,
      .time = time,
      .control_time = control_time,
      .targets = TargetData{solve_forward(x0, params, u_target, time).fields.back(),
                            solve_forward(x0, params, u_zero, time)},
      .weights = ObjectiveWeights{0.5, 0.05, 0.0},
  };
  if (paths > 0) {
    problem.noise = constant_noise(1, 0.3);
    for (std::size_t i = 0; i < paths; ++i) {
      problem.seeds.push_back(derive_seed(base_seed, i));
      problem.paths.push_back(sample_path(*problem.noise, time.final_time, time.steps,
                                          problem.seeds.back()));
    }
  }
  return {std::move(problem), u_zero};
}

}  // namespace nlsctl::testing

#include "nlsctl/noise.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nlsctl/errors.hpp"
#include "nlsctl/spectral.hpp"

namespace nlsctl {

NoiseProfile NoiseProfile::constant(double value) {
  NoiseProfile p;
  p.kind = Kind::constant;
  p.amplitude = value;
  return p;
}

NoiseProfile NoiseProfile::bump(double amplitude, std::vector<double> center, double decay) {
  NoiseProfile p;
  p.kind = Kind::bump;
  p.amplitude = amplitude;
  p.center = std::move(center);
  p.decay = decay;
  return p;
}

RealField NoiseProfile::sample(const SpatialGrid& grid) const {
  RealField out(grid.size(), amplitude);
  if (kind == Kind::constant) return out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = amplitude * std::pow(1.0 + grid.distance_sq(i, center), -decay);
  }
  return out;
}

bool NoiseModel::constant_profiles() const noexcept {
  for (const auto& p : profiles) {
    if (p.kind != NoiseProfile::Kind::constant) return false;
  }
  return true;
}

void NoiseModel::validate(int dimension) const {
  if (mu.size() != profiles.size()) {
    throw ValidationError("noise model has " + std::to_string(mu.size()) + " coefficients but " +
                          std::to_string(profiles.size()) + " profiles");
  }
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (conservative && mu[j].real() != 0.0) {
      throw ValidationError("conservative noise requires Re mu_j = 0 (channel " +
                            std::to_string(j) + ")");
    }
    const auto& p = profiles[j];
    if (!std::isfinite(p.amplitude)) throw ValidationError("noise profile amplitude not finite");
    if (p.kind == NoiseProfile::Kind::bump) {
      if (p.decay < 2.0) throw ValidationError("bump profile decay must be >= 2");
      if (!p.center.empty() && static_cast<int>(p.center.size()) != dimension) {
        throw ValidationError("bump center must have one coordinate per axis");
      }
    }
  }
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  // splitmix64 finalizer over (base, index)
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

WienerPath sample_path(const NoiseModel& model, double final_time, std::size_t steps,
                       std::uint64_t seed) {
  if (steps == 0) throw InvalidDiscretizationError("Wiener path needs M >= 1 steps");
  WienerPath path;
  path.time = TimeGrid{final_time, steps};
  path.time.validate();
  path.channels = model.channels();
  path.beta.assign((steps + 1) * path.channels, 0.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(path.time.dt()));
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t j = 0; j < path.channels; ++j) {
      path.at(k + 1, j) = path.at(k, j) + normal(rng);
    }
  }
  return path;
}

WienerPath refine_path(const WienerPath& coarse, std::uint64_t seed) {
  WienerPath fine;
  fine.time = TimeGrid{coarse.time.final_time, 2 * coarse.time.steps};
  fine.channels = coarse.channels;
  fine.beta.assign((fine.time.steps + 1) * fine.channels, 0.0);

  std::mt19937_64 rng(derive_seed(seed, coarse.time.steps));
  std::normal_distribution<double> normal(0.0, std::sqrt(0.25 * coarse.time.dt()));
  for (std::size_t k = 0; k <= coarse.time.steps; ++k) {
    for (std::size_t j = 0; j < fine.channels; ++j) fine.at(2 * k, j) = coarse.at(k, j);
  }
  for (std::size_t k = 0; k < coarse.time.steps; ++k) {
    for (std::size_t j = 0; j < fine.channels; ++j) {
      fine.at(2 * k + 1, j) = 0.5 * (coarse.at(k, j) + coarse.at(k + 1, j)) + normal(rng);
    }
  }
  return fine;
}

PhaseField::PhaseField(const SpatialGrid& grid, NoiseModel model, WienerPath path)
    : grid_(grid), model_(std::move(model)), path_(std::move(path)) {
  model_.validate(grid_.dimension());
  if (path_.channels != model_.channels()) {
    throw ShapeError("Wiener path has " + std::to_string(path_.channels) +
                     " channels, noise model has " + std::to_string(model_.channels()));
  }
  mu_profile_.assign(grid_.size(), 0.0);
  for (std::size_t j = 0; j < model_.channels(); ++j) {
    profiles_.push_back(model_.profiles[j].sample(grid_));
    const double mu2 = std::norm(model_.mu[j]);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      mu_profile_[i] += 0.5 * mu2 * profiles_[j][i] * profiles_[j][i];
    }
  }
}

ComplexField PhaseField::field(std::size_t k) const {
  if (k > path_.time.steps) throw ShapeError("phase node index out of range");
  ComplexField w(grid_);
  for (std::size_t j = 0; j < model_.channels(); ++j) {
    const Complex coef = model_.mu[j] * path_.at(k, j);
    for (std::size_t i = 0; i < grid_.size(); ++i) w.values[i] += coef * profiles_[j][i];
  }
  return w;
}

ComplexField PhaseField::increment(std::size_t k) const {
  if (k >= path_.time.steps) throw ShapeError("phase increment index out of range");
  ComplexField w(grid_);
  for (std::size_t j = 0; j < model_.channels(); ++j) {
    const Complex coef = model_.mu[j] * (path_.at(k + 1, j) - path_.at(k, j));
    for (std::size_t i = 0; i < grid_.size(); ++i) w.values[i] += coef * profiles_[j][i];
  }
  return w;
}

ComplexField gauge_factor(const PhaseField& phase, std::size_t k, int sign) {
  ComplexField out = phase.field(k);
  const double s = sign >= 0 ? 1.0 : -1.0;
  for (auto& z : out.values) z = std::exp(s * z);
  return out;
}

LowerOrderCoefficients lower_order_coeffs(const PhaseField& phase, std::size_t k) {
  const auto& grid = phase.grid();
  const int d = grid.dimension();
  LowerOrderCoefficients out{{}, ComplexField(grid)};
  if (phase.constant_profiles()) {
    for (int a = 0; a < d; ++a) out.b.emplace_back(grid);
    return out;
  }
  const ComplexField w = phase.field(k);
  out.c = spectral_laplacian(w);
  for (int a = 0; a < d; ++a) {
    ComplexField dw = spectral_derivative(w, a);
    for (std::size_t i = 0; i < grid.size(); ++i) out.c.values[i] += dw.values[i] * dw.values[i];
    dw *= 2.0;
    out.b.push_back(std::move(dw));
  }
  return out;
}

}  // namespace nlsctl

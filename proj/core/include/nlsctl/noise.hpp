#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "nlsctl/grid.hpp"
#include "nlsctl/trajectory.hpp"

namespace nlsctl {

/// Spatial profile e_j of one noise channel: either a constant or a bump
/// amplitude * (1 + |x - x0|^2)^(-decay), decay >= 2.
struct NoiseProfile {
  enum class Kind { constant, bump };

  Kind kind = Kind::constant;
  double amplitude = 1.0;
  std::vector<double> center;  // bump only, one entry per axis
  double decay = 2.0;

  static NoiseProfile constant(double value);
  static NoiseProfile bump(double amplitude, std::vector<double> center, double decay = 2.0);

  RealField sample(const SpatialGrid& grid) const;
};

/// W(t, x) = sum_j mu_j e_j(x) beta_j(t) with finitely many channels.
struct NoiseModel {
  std::vector<Complex> mu;
  std::vector<NoiseProfile> profiles;
  bool conservative = true;

  std::size_t channels() const noexcept { return mu.size(); }
  bool constant_profiles() const noexcept;

  /// Checks channel counts, bump decay, and Re mu_j == 0 when conservative.
  void validate(int dimension) const;
};

/// Sampled N-channel Brownian motion on a uniform time grid.
/// `beta` is row-major: beta[k * N + j] = beta_j(t_k).
struct WienerPath {
  TimeGrid time;
  std::size_t channels = 0;
  std::vector<double> beta;

  double at(std::size_t k, std::size_t j) const { return beta[k * channels + j]; }
  double& at(std::size_t k, std::size_t j) { return beta[k * channels + j]; }
};

/// Brownian increments N(0, dt) per channel from a 64-bit seed.
WienerPath sample_path(const NoiseModel& model, double final_time, std::size_t steps,
                       std::uint64_t seed);

/// Brownian-bridge midpoint refinement M -> 2M. Coarse nodes are copied
/// bit-for-bit; midpoints use an independent stream derived from `seed`.
WienerPath refine_path(const WienerPath& coarse, std::uint64_t seed);

/// Derives an independent per-path seed from a base seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

/// W(t_k, .) for every node of a path, plus mu(x) = 1/2 sum |mu_j|^2 e_j^2.
class PhaseField {
 public:
  PhaseField(const SpatialGrid& grid, NoiseModel model, WienerPath path);

  const SpatialGrid& grid() const noexcept { return grid_; }
  const NoiseModel& model() const noexcept { return model_; }
  const WienerPath& path() const noexcept { return path_; }
  const TimeGrid& time() const noexcept { return path_.time; }
  const RealField& mu_profile() const noexcept { return mu_profile_; }
  bool constant_profiles() const noexcept { return model_.constant_profiles(); }

  /// W(t_k, .).
  ComplexField field(std::size_t k) const;
  /// Pointwise W(t_{k+1}) - W(t_k).
  ComplexField increment(std::size_t k) const;

 private:
  SpatialGrid grid_;
  NoiseModel model_;
  WienerPath path_;
  std::vector<RealField> profiles_;
  RealField mu_profile_;
};

/// Pointwise exp(sign * W(t_k, x)).
ComplexField gauge_factor(const PhaseField& phase, std::size_t k, int sign);

/// Lower-order coefficients of the gauge-transformed generator
/// e^{-W} Laplacian(e^W v) = Laplacian v + b . grad v + c v:
/// b = 2 grad W, c = Laplacian W + sum_j (d_j W)^2.
struct LowerOrderCoefficients {
  std::vector<ComplexField> b;  // one per axis
  ComplexField c;
};

LowerOrderCoefficients lower_order_coeffs(const PhaseField& phase, std::size_t k);

}  // namespace nlsctl

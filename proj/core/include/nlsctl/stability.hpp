#pragma once

#include <optional>
#include <vector>

#include "nlsctl/forward.hpp"

namespace nlsctl {

struct StabilityLevel {
  double scale = 0.0;          // 2^{-level}
  double control_gap = 0.0;    // ||u_n - u||_{L^2(0,T)}
  double path_gap = 0.0;       // max_{k,j} |beta_n - beta|
  double state_error = 0.0;    // max_k ||X_n(t_k) - X(t_k)||_{L^2}
};

/// Perturbation data for a sweep. Level l uses u_n = P_K(u + 2^{-l} du) and
/// beta_n = beta + 2^{-l} dbeta (the latter only when a noise model is given).
struct StabilityInputs {
  ControlPath control_direction;
  std::optional<NoiseModel> noise;
  std::optional<WienerPath> path;
  std::optional<WienerPath> path_direction;
};

/// Solves the reference problem once and every perturbed problem for
/// levels 0..levels-1. Levels are independent and run concurrently.
std::vector<StabilityLevel> stability_sweep(const ComplexField& x0, const ModelParams& params,
                                            const ControlPath& u, const TimeGrid& time,
                                            const StabilityInputs& inputs, std::size_t levels);

}  // namespace nlsctl

#pragma once

// Per-step data shared by the tangent and adjoint solvers: everything needed
// to apply the derivative of one forward step or its transpose.

#include <cmath>
#include <vector>

#include "nlsctl/forward.hpp"
#include "nlsctl/spectral.hpp"

namespace nlsctl::detail {

struct LinearizedStep {
  ComplexField pre_phase;       // w = free(dt/2) X_k, the input of the phase step
  std::vector<Complex> rotation;  // exp(i theta), theta = -dt (lambda |w|^{alpha-1} + V)
  std::vector<Complex> unit;      // w / |w| (0 where w = 0)
  RealField slope;                // lambda (alpha - 1) |w|^{alpha-2}
  std::vector<double> u_mid;
  ComplexField noise_factor;      // exp(W_{k+1} - W_k); empty grid-sized ones if no noise
  bool has_noise = false;
};

inline LinearizedStep linearize_step(const ComplexField& x_k, const ModelParams& params,
                                     const ControlPath& u, const TimeGrid& time, std::size_t k,
                                     const PhaseField* phase) {
  const double dt = time.dt();
  LinearizedStep s{free_propagate(x_k, 0.5 * dt), {}, {}, {}, {}, ComplexField(x_k.grid), false};
  s.u_mid = u.evaluate(time.time(k) + 0.5 * dt);
  const auto pot = total_potential(params, s.u_mid, x_k.size());
  const double lam = static_cast<double>(params.lambda);
  const std::size_t n = x_k.size();
  s.rotation.resize(n);
  s.unit.resize(n);
  s.slope.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex w = s.pre_phase.values[i];
    const double r = std::abs(w);
    const double nl = lam == 0.0 ? 0.0 : lam * std::pow(r, params.alpha - 1.0);
    s.rotation[i] = std::polar(1.0, -dt * (nl + pot[i]));
    if (r > 0.0 && lam != 0.0) {
      s.unit[i] = w / r;
      s.slope[i] = lam * (params.alpha - 1.0) * std::pow(r, params.alpha - 2.0);
    } else {
      s.unit[i] = 0.0;
      s.slope[i] = 0.0;
    }
  }
  if (phase) {
    s.has_noise = true;
    s.noise_factor = phase->increment(k);
    for (auto& z : s.noise_factor.values) z = std::exp(z);
  }
  return s;
}

/// V . delta_u at every grid point.
inline RealField control_potential(const ModelParams& params, const std::vector<double>& du,
                                   std::size_t size) {
  RealField out(size, 0.0);
  for (std::size_t j = 0; j < params.v.size(); ++j) {
    if (du[j] == 0.0) continue;
    for (std::size_t i = 0; i < size; ++i) out[i] += du[j] * params.v[j][i];
  }
  return out;
}

}  // namespace nlsctl::detail

#include "nlsctl/forward.hpp"

#include <cmath>
#include <string>

#include "nlsctl/errors.hpp"
#include "nlsctl/spectral.hpp"

namespace nlsctl {

bool ModelParams::critical(int dimension) const {
  return std::abs(alpha - critical_exponent(dimension)) < 1e-12;
}

void ModelParams::validate(const SpatialGrid& grid) const {
  if (lambda < -1 || lambda > 1) throw ValidationError("lambda must be -1, 0 or +1");
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be > 1");
  const double critical_alpha = critical_exponent(grid.dimension());
  if (lambda == 1 && alpha >= critical_alpha - 1e-12) {
    throw ValidationError("focusing nonlinearity is only supported below the mass-critical "
                          "exponent 1 + 4/d");
  }
  if (!v0.empty() && v0.size() != grid.size()) throw ShapeError("V_0 does not match the grid");
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j].size() != grid.size()) {
      throw ShapeError("V_" + std::to_string(j + 1) + " does not match the grid");
    }
  }
  if (admissible && admissible->dimension() != v.size()) {
    throw ValidationError("admissible set dimension " + std::to_string(admissible->dimension()) +
                          " differs from the number of controls " + std::to_string(v.size()));
  }
}

namespace detail {

RealField total_potential(const ModelParams& params, std::span<const double> u,
                          std::size_t size) {
  RealField pot = params.v0.empty() ? RealField(size, 0.0) : params.v0;
  for (std::size_t j = 0; j < params.v.size(); ++j) {
    const double uj = u[j];
    if (uj == 0.0) continue;
    const auto& vj = params.v[j];
    for (std::size_t i = 0; i < size; ++i) pot[i] += uj * vj[i];
  }
  return pot;
}

void nonlinear_phase_step(ComplexField& f, const ModelParams& params,
                          const RealField& potential, double dt) {
  const double lam = static_cast<double>(params.lambda);
  const double power = params.alpha - 1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto& z = f.values[i];
    const double nl = lam == 0.0 ? 0.0 : lam * std::pow(std::abs(z), power);
    z *= std::polar(1.0, -dt * (nl + potential[i]));
  }
}

}  // namespace detail

namespace {

void check_control(const ModelParams& params, const ControlPath& u, const TimeGrid& time) {
  if (u.channels != params.controls()) {
    throw ShapeError("control has " + std::to_string(u.channels) + " channels, model has " +
                     std::to_string(params.controls()) + " potentials");
  }
  if (params.controls() > 0 && std::abs(u.time.final_time - time.final_time) > 1e-12) {
    throw ShapeError("control and state time grids cover different intervals");
  }
  if (params.admissible && !u.is_admissible(*params.admissible)) {
    throw ValidationError("control leaves the admissible set K");
  }
}

double max_modulus(const ComplexField& f) {
  double m = 0.0;
  for (const auto& z : f.values) {
    const double a = std::abs(z);
    if (!std::isfinite(a)) return a;
    m = std::max(m, a);
  }
  return m;
}

}  // namespace

Trajectory solve_forward(const ComplexField& x0, const ModelParams& params,
                         const ControlPath& u, const TimeGrid& time, const PhaseField* phase,
                         const ForwardOptions& options) {
  time.validate();
  params.validate(x0.grid);
  if (!x0.all_finite()) throw InvalidFieldError("initial state contains non-finite values");
  check_control(params, u, time);
  if (phase) {
    require_same_grid(phase->grid(), x0.grid);
    if (!(phase->time() == time)) throw ShapeError("Wiener path and state use different time grids");
  }

  Trajectory traj(x0.grid);
  traj.time = time;
  traj.stride = options.stride;
  const auto stored = Trajectory::stored_nodes(time.steps, options.stride);
  traj.fields.reserve(stored.size());

  const double dt = time.dt();
  ComplexField x = x0;
  traj.node_index.push_back(0);
  traj.fields.push_back(x);
  std::size_t next = 1;

  for (std::size_t k = 0; k < time.steps; ++k) {
    const auto u_mid = u.evaluate(time.time(k) + 0.5 * dt);
    const auto pot = detail::total_potential(params, u_mid, x.size());

    free_propagate_inplace(x, 0.5 * dt);
    detail::nonlinear_phase_step(x, params, pot, dt);
    free_propagate_inplace(x, 0.5 * dt);
    if (phase) {
      const ComplexField dw = phase->increment(k);
      for (std::size_t i = 0; i < x.size(); ++i) x.values[i] *= std::exp(dw.values[i]);
    }

    const double m = max_modulus(x);
    if (!std::isfinite(m) || m > options.blowup_threshold) {
      throw BlowUpError("solution exceeded the blow-up threshold at t = " +
                            std::to_string(time.time(k + 1)),
                        time.time(k));
    }
    if (next < stored.size() && stored[next] == k + 1) {
      traj.node_index.push_back(k + 1);
      traj.fields.push_back(x);
      ++next;
    }
  }
  return traj;
}

Trajectory rescaled_view(const Trajectory& traj, const PhaseField& phase, int sign) {
  require_same_grid(traj.grid, phase.grid());
  if (!(traj.time == phase.time())) throw ShapeError("trajectory and phase use different time nodes");
  Trajectory out = traj;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const ComplexField g = gauge_factor(phase, out.node_index[i], sign);
    for (std::size_t p = 0; p < g.size(); ++p) out.fields[i].values[p] *= g.values[p];
  }
  return out;
}

}  // namespace nlsctl

#include "nlsctl/adjoint.hpp"

#include <cmath>
#include <string>

#include "nlsctl/errors.hpp"
#include "step_kernel.hpp"

namespace nlsctl {
namespace {

void check_targets(const Trajectory& forward, const TargetData& targets, double gamma1) {
  require_same_grid(forward.grid, targets.terminal.grid);
  if (gamma1 > 0.0) {
    if (!targets.tracking) throw ValidationError("gamma1 > 0 needs a tracking target");
    require_same_nodes(forward, *targets.tracking);
  }
}

// Adds -scale * gamma1 (X_k - Xtrack_k) to y.
void add_tracking_source(ComplexField& y, const Trajectory& forward, const TargetData& targets,
                         double gamma1, std::size_t k, double scale) {
  if (gamma1 == 0.0) return;
  const auto& x = forward.fields[k].values;
  const auto& target = targets.tracking->fields[k].values;
  const double c = scale * gamma1;
  for (std::size_t i = 0; i < y.size(); ++i) y.values[i] -= c * (x[i] - target[i]);
}

ControlPath empty_coupling(const ControlPath& u) {
  ControlPath c = u;
  std::fill(c.values.begin(), c.values.end(), 0.0);
  return c;
}

// exp(N) for a traceless real 2x2 N = dt * [[a, b], [c, -a]] applied to (re, im).
Complex rotate_real_linear(Complex z, double a, double b, double c) {
  const double det = -(a * a + b * c);
  double cos_part, sin_part;
  if (std::abs(det) < 1e-8) {
    cos_part = 1.0 - det / 2.0 + det * det / 24.0;
    sin_part = 1.0 - det / 6.0 + det * det / 120.0;
  } else if (det > 0.0) {
    const double w = std::sqrt(det);
    cos_part = std::cos(w);
    sin_part = std::sin(w) / w;
  } else {
    const double w = std::sqrt(-det);
    cos_part = std::cosh(w);
    sin_part = std::sinh(w) / w;
  }
  const double re = z.real(), im = z.imag();
  return {cos_part * re + sin_part * (a * re + b * im),
          cos_part * im + sin_part * (c * re - a * im)};
}

AdjointState solve_discrete(const Trajectory& forward, const ModelParams& params,
                            const ControlPath& u, const TargetData& targets, double gamma1,
                            const PhaseField* phase, std::optional<TruncationLevel> trunc) {
  const auto& time = forward.time;
  const double dt = time.dt();
  const std::size_t steps = time.steps;
  const double dv = forward.grid.cell_volume();

  AdjointState state{Trajectory(forward.grid), empty_coupling(u), AdjointMode::discrete_adjoint};
  state.y.time = time;
  state.y.node_index = forward.node_index;
  state.y.fields.assign(steps + 1, ComplexField(forward.grid));

  ComplexField y = targets.terminal;
  y -= forward.fields[steps];
  state.y.fields[steps] = y;
  add_tracking_source(y, forward, targets, gamma1, steps, time.trapezoid_weight(steps));

  std::vector<double> dj(u.values.size(), 0.0);  // sum of interpolated per-step sensitivities
  for (std::size_t kk = steps; kk-- > 0;) {
    const auto step = detail::linearize_step(forward.fields[kk], params, u, time, kk, phase);
    if (step.has_noise) {
      for (std::size_t i = 0; i < y.size(); ++i) y.values[i] *= std::conj(step.noise_factor.values[i]);
    }
    free_propagate_inplace(y, -0.5 * dt);

    const auto& w = step.pre_phase.values;
    std::vector<double> im_wy(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      y.values[i] *= std::conj(step.rotation[i]);
      im_wy[i] = (w[i] * std::conj(y.values[i])).imag();
    }
    if (params.controls() > 0) {
      const auto st = interpolation_stencil(u.time, time.time(kk) + 0.5 * dt);
      for (std::size_t j = 0; j < params.controls(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += params.v[j][i] * im_wy[i];
        s *= dt * dv;
        dj[st.lower * u.channels + j] += (1.0 - st.theta) * s;
        dj[(st.lower + 1) * u.channels + j] += st.theta * s;
      }
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      double slope = step.slope[i];
      if (trunc && slope != 0.0) slope *= trunc->factor(std::abs(w[i]));
      y.values[i] += dt * slope * im_wy[i] * step.unit[i];
    }
    free_propagate_inplace(y, -0.5 * dt);
    add_tracking_source(y, forward, targets, gamma1, kk, time.trapezoid_weight(kk));
    state.y.fields[kk] = y;
  }

  for (std::size_t k = 0; k < u.nodes(); ++k) {
    const double w = u.time.trapezoid_weight(k);
    for (std::size_t j = 0; j < u.channels; ++j) state.coupling.at(k, j) = dj[k * u.channels + j] / w;
  }
  return state;
}

AdjointState solve_continuous(const Trajectory& forward, const ModelParams& params,
                              const ControlPath& u, const TargetData& targets, double gamma1,
                              const PhaseField* phase, std::optional<TruncationLevel> trunc) {
  const auto& time = forward.time;
  const double dt = time.dt();
  const std::size_t steps = time.steps;
  const double lam = static_cast<double>(params.lambda);

  AdjointState state{Trajectory(forward.grid), empty_coupling(u), AdjointMode::continuous};
  state.y.time = time;
  state.y.node_index = forward.node_index;
  state.y.fields.assign(steps + 1, ComplexField(forward.grid));

  ComplexField y = targets.terminal;
  y -= forward.fields[steps];
  state.y.fields[steps] = y;

  for (std::size_t kk = steps; kk-- > 0;) {
    add_tracking_source(y, forward, targets, gamma1, kk + 1, 0.5 * dt);

    ComplexField later = forward.fields[kk + 1];
    if (phase) {
      const ComplexField dw = phase->increment(kk);
      for (std::size_t i = 0; i < y.size(); ++i) {
        const Complex e = std::exp(dw.values[i]);
        y.values[i] *= std::conj(e);
        later.values[i] /= e;
      }
    }
    free_propagate_inplace(y, -0.5 * dt);

    // X at the step midpoint, averaged from both ends of the step.
    ComplexField mid = free_propagate(forward.fields[kk], 0.5 * dt);
    free_propagate_inplace(later, -0.5 * dt);
    for (std::size_t i = 0; i < mid.size(); ++i) mid.values[i] = 0.5 * (mid.values[i] + later.values[i]);

    const auto lin = lam == 0.0 ? Linearization{RealField(mid.size(), 0.0),
                                                std::vector<Complex>(mid.size(), 0.0)}
                                : linearize(mid, params.alpha, trunc);
    const auto pot = detail::total_potential(params, u.evaluate(time.time(kk) + 0.5 * dt), mid.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      // Reversed time: dY/ds = i kappa Y - i lambda h2 conj(Y), kappa = lambda h1 + V.
      const double kappa = lam * lin.h1[i] + pot[i];
      const double p = lam * lin.h2[i].real();
      const double q = lam * lin.h2[i].imag();
      y.values[i] = rotate_real_linear(y.values[i], dt * q, -dt * (kappa + p), dt * (kappa - p));
    }
    free_propagate_inplace(y, -0.5 * dt);
    add_tracking_source(y, forward, targets, gamma1, kk, 0.5 * dt);
    state.y.fields[kk] = y;
  }

  state.coupling = node_coupling(forward, state.y, params, u.time);
  return state;
}

}  // namespace

AdjointState solve_backward(const Trajectory& forward, const ModelParams& params,
                            const ControlPath& u, const TargetData& targets, double gamma1,
                            AdjointMode mode, const PhaseField* phase,
                            std::optional<TruncationLevel> trunc) {
  if (!forward.dense()) throw ShapeError("backward solve needs a dense forward trajectory");
  if (gamma1 < 0.0) throw ValidationError("gamma1 must be non-negative");
  check_targets(forward, targets, gamma1);
  if (u.channels != params.controls()) throw ShapeError("control channel count mismatch");
  if (phase && !(phase->time() == forward.time)) {
    throw ShapeError("Wiener path and forward trajectory use different time grids");
  }
  if (mode == AdjointMode::continuous) {
    if (phase && !phase->constant_profiles()) {
      throw UnsupportedModeError(
          "continuous backward mode needs constant noise profiles; use discrete-adjoint mode");
    }
    return solve_continuous(forward, params, u, targets, gamma1, phase, trunc);
  }
  return solve_discrete(forward, params, u, targets, gamma1, phase, trunc);
}

ControlPath node_coupling(const Trajectory& forward, const Trajectory& y,
                          const ModelParams& params, const TimeGrid& control_time) {
  require_same_nodes(forward, y);
  if (!forward.dense()) throw ShapeError("coupling needs dense trajectories");
  if (std::abs(forward.time.final_time - control_time.final_time) >
      1e-12 * forward.time.final_time) {
    throw ShapeError("control and state horizons differ");
  }
  // Pointwise coupling on state nodes, then its lumped L2 projection onto the
  // piecewise-linear control basis. On identical grids this is plain sampling.
  ControlPath c = ControlPath::zeros(control_time, params.controls());
  const double dv = forward.grid.cell_volume();
  for (std::size_t n = 0; n < forward.size(); ++n) {
    const auto& x = forward.fields[n].values;
    const auto& yy = y.fields[n].values;
    const double w = forward.time.trapezoid_weight(n);
    const auto st = interpolation_stencil(control_time, forward.time.time(n));
    for (std::size_t j = 0; j < params.controls(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += params.v[j][i] * (x[i] * std::conj(yy[i])).imag();
      s *= dv * w;
      c.at(st.lower, j) += (1.0 - st.theta) * s;
      if (st.theta > 0.0) c.at(st.lower + 1, j) += st.theta * s;
    }
  }
  for (std::size_t k = 0; k < control_time.nodes(); ++k) {
    for (std::size_t j = 0; j < params.controls(); ++j) c.at(k, j) /= control_time.trapezoid_weight(k);
  }
  return c;
}

ControlPath smoothness_gradient(const ControlPath& u, double gamma3) {
  ControlPath g = ControlPath::zeros(u.time, u.channels);
  if (gamma3 == 0.0) return g;
  const double ds = u.time.dt();
  const std::size_t last = u.time.steps;
  for (std::size_t k = 0; k <= last; ++k) {
    for (std::size_t j = 0; j < u.channels; ++j) {
      double d = 0.0;
      if (k > 0) d += u.at(k, j) - u.at(k - 1, j);
      if (k < last) d -= u.at(k + 1, j) - u.at(k, j);
      g.at(k, j) = 2.0 * gamma3 / ds * d / u.time.trapezoid_weight(k);
    }
  }
  return g;
}

ControlPath gradient_eta(const ControlPath& u, const AdjointState& adjoint, double gamma2,
                         double gamma3) {
  if (!(u.time == adjoint.coupling.time) || u.channels != adjoint.coupling.channels) {
    throw ShapeError("control and adjoint coupling use different nodes");
  }
  ControlPath eta = smoothness_gradient(u, gamma3);
  for (std::size_t i = 0; i < eta.values.size(); ++i) {
    eta.values[i] += 2.0 * (gamma2 * u.values[i] - adjoint.coupling.values[i]);
  }
  return eta;
}

}  // namespace nlsctl

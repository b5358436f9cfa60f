#include "nlsctl/tangent.hpp"

#include <string>

#include "nlsctl/errors.hpp"
#include "step_kernel.hpp"

namespace nlsctl {
namespace {

// Derivative of one forward step applied to `delta`, in place. The phase
// step derivative is
//   e^{i theta} (delta - i dt w (lambda (alpha-1) |w|^{alpha-3} Re(conj(w) delta) + dV)),
// which is the exact solution of the pointwise real-linear (h1, h2) system
// along the phase-step orbit.
void apply_step_derivative(ComplexField& delta, const detail::LinearizedStep& s,
                           const RealField* control_source, double dt) {
  free_propagate_inplace(delta, 0.5 * dt);
  const auto& w = s.pre_phase.values;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    double rate = s.slope[i] * (std::conj(s.unit[i]) * delta.values[i]).real();
    if (control_source) rate += (*control_source)[i];
    delta.values[i] = s.rotation[i] * (delta.values[i] - Complex(0.0, dt * rate) * w[i]);
  }
  free_propagate_inplace(delta, 0.5 * dt);
  if (s.has_noise) {
    for (std::size_t i = 0; i < delta.size(); ++i) delta.values[i] *= s.noise_factor.values[i];
  }
}

}  // namespace

Trajectory solve_variational(const Trajectory& forward, const ModelParams& params,
                             const ControlPath& u, const VariationalSource& source,
                             const PhaseField* phase) {
  if (!forward.dense()) throw ShapeError("variational solve needs a dense forward trajectory");
  const auto& time = forward.time;
  const double dt = time.dt();

  const FieldSource* field_source = std::get_if<FieldSource>(&source);
  const ControlDirection* direction = std::get_if<ControlDirection>(&source);
  if (field_source) require_same_nodes(forward, field_source->psi);
  if (direction && direction->direction.channels != params.controls()) {
    throw ShapeError("control direction has " + std::to_string(direction->direction.channels) +
                     " channels, model has " + std::to_string(params.controls()));
  }

  Trajectory out(forward.grid);
  out.time = time;
  out.stride = 1;
  out.node_index = forward.node_index;
  out.fields.reserve(forward.size());

  ComplexField psi(forward.grid);
  out.fields.push_back(psi);
  for (std::size_t k = 0; k < time.steps; ++k) {
    const auto step = detail::linearize_step(forward.fields[k], params, u, time, k, phase);
    if (field_source) {
      const auto& src = field_source->psi.fields;
      for (std::size_t i = 0; i < psi.size(); ++i) psi.values[i] -= 0.5 * dt * src[k].values[i];
      apply_step_derivative(psi, step, nullptr, dt);
      for (std::size_t i = 0; i < psi.size(); ++i) psi.values[i] -= 0.5 * dt * src[k + 1].values[i];
    } else {
      const auto dv = detail::control_potential(
          params, direction->direction.evaluate(time.time(k) + 0.5 * dt), psi.size());
      apply_step_derivative(psi, step, &dv, dt);
    }
    out.fields.push_back(psi);
  }
  return out;
}

}  // namespace nlsctl

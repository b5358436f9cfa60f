#include "nlsctl/stability.hpp"

#include <cmath>

#include "nlsctl/errors.hpp"
#include "nlsctl/norms.hpp"
#include "parallel.hpp"

namespace nlsctl {

std::vector<StabilityLevel> stability_sweep(const ComplexField& x0, const ModelParams& params,
                                            const ControlPath& u, const TimeGrid& time,
                                            const StabilityInputs& inputs, std::size_t levels) {
  const auto& du = inputs.control_direction;
  if (!(du.time == u.time) || du.channels != u.channels) {
    throw ShapeError("control direction must share the control nodes");
  }
  const bool noisy = inputs.noise.has_value();
  if (noisy && (!inputs.path || !inputs.path_direction)) {
    throw ValidationError("a noisy sweep needs a base path and a path direction");
  }
  if (noisy && (!(inputs.path->time == time) || !(inputs.path_direction->time == time) ||
                inputs.path->channels != inputs.path_direction->channels)) {
    throw ShapeError("Wiener paths must live on the state time grid");
  }

  std::optional<PhaseField> base_phase;
  if (noisy) base_phase.emplace(x0.grid, *inputs.noise, *inputs.path);
  const Trajectory reference =
      solve_forward(x0, params, u, time, base_phase ? &*base_phase : nullptr);

  std::vector<StabilityLevel> out(levels);
  detail::parallel_for(levels, [&](std::size_t l) {
    StabilityLevel& level = out[l];
    level.scale = std::ldexp(1.0, -static_cast<int>(l));

    ControlPath un = u;
    for (std::size_t i = 0; i < un.values.size(); ++i) un.values[i] += level.scale * du.values[i];
    if (params.admissible) un = project_K(un, *params.admissible);
    ControlPath gap = un;
    for (std::size_t i = 0; i < gap.values.size(); ++i) gap.values[i] -= u.values[i];
    level.control_gap = control_norm(gap);

    std::optional<PhaseField> phase;
    if (noisy) {
      WienerPath bn = *inputs.path;
      for (std::size_t i = 0; i < bn.beta.size(); ++i) {
        const double shift = level.scale * inputs.path_direction->beta[i];
        bn.beta[i] += shift;
        level.path_gap = std::max(level.path_gap, std::abs(shift));
      }
      phase.emplace(x0.grid, *inputs.noise, std::move(bn));
    }
    const Trajectory xn = solve_forward(x0, params, un, time, phase ? &*phase : nullptr);
    for (std::size_t k = 0; k < xn.size(); ++k) {
      level.state_error =
          std::max(level.state_error, lp_norm(xn.fields[k] - reference.fields[k], 2.0));
    }
  });
  return out;
}

}  // namespace nlsctl

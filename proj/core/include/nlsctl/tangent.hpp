#pragma once

#include <variant>

#include "nlsctl/forward.hpp"

namespace nlsctl {

/// Field-valued source Psi of the variational equation
///   i dpsi = (Laplacian psi + lambda h1 psi + lambda h2 conj(psi) + (V_0 + u.V) psi) dt
///            - i Psi dt (+ noise),  psi(0) = 0.
/// Psi must be stored on every node of the forward grid.
struct FieldSource {
  Trajectory psi;
};

/// Control direction w; corresponds to Psi = i (w . V) X and is injected
/// where the control enters the discrete step, so psi is the exact
/// derivative of the discrete forward map in direction w.
struct ControlDirection {
  ControlPath direction;
};

using VariationalSource = std::variant<FieldSource, ControlDirection>;

/// Tangent solve along a dense forward trajectory. Uses the forward
/// splitting skeleton: free half steps, the exact linearization of the
/// pointwise phase step (the 2x2 real-linear (h1, h2) coupling), and the
/// noise factor. Field sources enter by the trapezoid rule.
Trajectory solve_variational(const Trajectory& forward, const ModelParams& params,
                             const ControlPath& u, const VariationalSource& source,
                             const PhaseField* phase = nullptr);

}  // namespace nlsctl

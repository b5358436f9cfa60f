#pragma once

#include <optional>
#include <vector>

#include "nlsctl/control_path.hpp"
#include "nlsctl/grid.hpp"
#include "nlsctl/noise.hpp"
#include "nlsctl/trajectory.hpp"

namespace nlsctl {

/// Coefficients of
///   i dX = (Laplacian X + lambda |X|^{alpha-1} X + V_0 X + sum_j u_j V_j X) dt
///          + i X o dW.
/// lambda = -1 is defocusing, +1 focusing, 0 switches the nonlinearity off.
struct ModelParams {
  int lambda = -1;
  double alpha = 3.0;
  RealField v0;                  // empty means V_0 = 0
  std::vector<RealField> v;      // control potentials V_1..V_m
  std::optional<AdmissibleSet> admissible;  // unset: controls unconstrained

  std::size_t controls() const noexcept { return v.size(); }
  static double critical_exponent(int dimension) { return 1.0 + 4.0 / dimension; }
  bool critical(int dimension) const;

  /// alpha > 1; focusing only below the mass-critical exponent; potential
  /// sizes match the grid; K has dimension m.
  void validate(const SpatialGrid& grid) const;
};

struct ForwardOptions {
  std::size_t stride = 1;
  double blowup_threshold = 1e8;
};

/// Strang splitting per step [t_k, t_{k+1}]:
///   free flow dt/2, pointwise phase exp(-i dt (lambda |v|^{alpha-1} + V_0 + u(t_{k+1/2}) . V)),
///   free flow dt/2, then the exact noise sub-flow exp(W(t_{k+1}) - W(t_k)).
/// `phase == nullptr` runs the deterministic equation. The control is
/// evaluated at step midpoints by linear interpolation.
///
/// Throws ValidationError for an inadmissible control, ShapeError for
/// mismatched grids and BlowUpError when max |X| exceeds the threshold.
Trajectory solve_forward(const ComplexField& x0, const ModelParams& params,
                         const ControlPath& u, const TimeGrid& time,
                         const PhaseField* phase = nullptr, const ForwardOptions& options = {});

/// Rescaled view v(t) = exp(sign * W(t)) X(t); sign = -1 is the usual
/// transform, sign = +1 undoes it.
Trajectory rescaled_view(const Trajectory& traj, const PhaseField& phase, int sign = -1);

namespace detail {

/// Total potential V_0 + u . V at every grid point.
RealField total_potential(const ModelParams& params, std::span<const double> u,
                          std::size_t size);

/// Pointwise nonlinear phase step, in place.
void nonlinear_phase_step(ComplexField& f, const ModelParams& params,
                          const RealField& potential, double dt);

}  // namespace detail

}  // namespace nlsctl

#pragma once

#include <optional>

#include "nlsctl/forward.hpp"
#include "nlsctl/linearization.hpp"

namespace nlsctl {

/// Terminal target X_T and optional tracking target (dense on the state grid).
struct TargetData {
  ComplexField terminal;
  std::optional<Trajectory> tracking;
};

enum class AdjointMode {
  /// Time-reversed splitting of the continuous backward equation.
  continuous,
  /// Exact transpose of the discrete forward map.
  discrete_adjoint,
};

/// Backward solution Y on the forward nodes together with the coupling
/// Im int V_j X conj(Y) dx sampled on the control nodes.
///
/// In discrete-adjoint mode Y_k = -1/2 dJ/dX_k (so Y_M = -(X_M - X_T)) and
/// the coupling is the exact discrete counterpart of the integral, chosen so
/// that 2 (gamma2 u - coupling) is the L^2(0,T) Riesz representative of the
/// gradient of the state-dependent part of the discrete objective.
struct AdjointState {
  Trajectory y;
  ControlPath coupling;
  AdjointMode mode = AdjointMode::discrete_adjoint;
};

/// Backward solve along a dense forward trajectory.
///
/// Throws UnsupportedModeError for continuous mode with noise whose profiles
/// are not constant.
AdjointState solve_backward(const Trajectory& forward, const ModelParams& params,
                            const ControlPath& u, const TargetData& targets, double gamma1,
                            AdjointMode mode, const PhaseField* phase = nullptr,
                            std::optional<TruncationLevel> trunc = std::nullopt);

/// eta(u) = 2 (gamma2 u - coupling) on the control nodes, plus the gradient
/// of the gamma3 smoothness penalty when gamma3 > 0.
ControlPath gradient_eta(const ControlPath& u, const AdjointState& adjoint, double gamma2,
                         double gamma3 = 0.0);

/// Coupling Im int V_j X conj(Y) dx evaluated on every state node and mapped
/// to the control nodes by the lumped (trapezoid) L2 projection onto the
/// piecewise-linear basis. When both grids coincide this is pointwise sampling.
ControlPath node_coupling(const Trajectory& forward, const Trajectory& y,
                          const ModelParams& params, const TimeGrid& control_time);

/// Gradient of gamma3 sum |u_{k+1} - u_k|^2 / ds divided by the trapezoid
/// weights (the discrete negative second difference, natural boundaries).
ControlPath smoothness_gradient(const ControlPath& u, double gamma3);

}  // namespace nlsctl

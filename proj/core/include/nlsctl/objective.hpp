#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nlsctl/adjoint.hpp"
#include "nlsctl/control_path.hpp"
#include "nlsctl/forward.hpp"
#include "nlsctl/noise.hpp"

namespace nlsctl {

/// gamma1 (tracking) >= 0, gamma2 (control energy) > 0, gamma3 (control
/// smoothness) >= 0.
struct ObjectiveWeights {
  double gamma1 = 0.0;
  double gamma2 = 1.0;
  double gamma3 = 0.0;

  void validate() const;
};

/// Everything that fixes the (sample) objective as a function of u. The
/// Wiener paths are common random numbers: the same set is reused for every
/// objective and gradient evaluation.
struct ControlProblem {
  ComplexField x0;
  ModelParams params;
  TimeGrid time;
  TimeGrid control_time;
  TargetData targets;
  ObjectiveWeights weights;
  std::optional<NoiseModel> noise;
  std::vector<WienerPath> paths;  // empty: deterministic problem
  std::vector<std::uint64_t> seeds;
  AdjointMode adjoint_mode = AdjointMode::discrete_adjoint;
  std::optional<TruncationLevel> trunc;

  bool stochastic() const noexcept { return noise.has_value() && !paths.empty(); }
  std::size_t sample_count() const noexcept { return stochastic() ? paths.size() : 1; }

  /// Grids, weights, K and path shapes are consistent.
  void validate() const;
};

/// Objective split into its four terms (each already weighted) with the
/// Monte-Carlo standard error of the total.
struct ObjectiveValue {
  double phi = 0.0;
  double terminal = 0.0;
  double tracking = 0.0;
  double energy = 0.0;
  double smoothness = 0.0;
  double std_error = 0.0;
  std::vector<double> per_path;
};

/// Phi(u) = mean over paths of |X(T) - X_T|^2 + gamma1 int |X - Xtrack|^2
///          + gamma2 int |u|^2 + gamma3 int |u'|^2.
/// Time integrals use trapezoid weights; u' uses forward differences.
ObjectiveValue objective(const ControlPath& u, const ControlProblem& problem);

struct GradientEvaluation {
  ObjectiveValue value;
  ControlPath eta;       // sample mean of eta(u)
  ControlPath coupling;  // sample mean of Im int V X conj(Y) dx
};

/// Objective plus adjoint gradient, one forward and one backward solve per path.
GradientEvaluation evaluate_gradient(const ControlPath& u, const ControlProblem& problem);

/// Control-energy and smoothness terms alone (no state solve).
double control_energy(const ControlPath& u, double gamma2);
double control_smoothness(const ControlPath& u, double gamma3);

/// r(u) = || u - P_K(coupling / gamma2) ||_{L^2(0,T)}.
double optimality_residual(const ControlPath& u, const ControlPath& coupling, double gamma2,
                           const AdmissibleSet& k_set);
double optimality_residual(const ControlPath& u, const AdjointState& adjoint, double gamma2,
                           const AdmissibleSet& k_set);

/// ||u - P_K(u - eta / (2 gamma2))||. Equals optimality_residual when
/// gamma3 = 0 and stays a stationarity measure when gamma3 > 0.
double projected_gradient_residual(const ControlPath& u, const ControlPath& eta, double gamma2,
                                   const AdmissibleSet& k_set);

/// P_K(coupling / gamma2), the right-hand side of the fixed-point characterization.
ControlPath fixed_point_map(const ControlPath& coupling, double gamma2, const AdmissibleSet& k_set);

}  // namespace nlsctl

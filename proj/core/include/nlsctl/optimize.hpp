#pragma once

#include <string>
#include <vector>

#include "nlsctl/objective.hpp"

namespace nlsctl {

enum class OptimizerMethod { pgd, fixed_point };

struct OptimizerOptions {
  OptimizerMethod method = OptimizerMethod::pgd;
  double theta = 0.5;  // fixed-point damping
  double tol = 1e-4;   // stop once r(u) <= tol
  std::size_t max_iter = 200;
  double armijo_sigma = 1e-4;
  std::size_t max_backtracks = 30;
  double initial_step = 0.0;  // <= 0 picks 1 / gamma2
};

struct IterationRecord {
  std::size_t iteration = 0;
  double phi = 0.0;
  double grad_norm = 0.0;
  double residual = 0.0;
  double step = 0.0;
  std::size_t backtracks = 0;
};

enum class RunStatus { converged, max_iterations, stalled };
std::string to_string(RunStatus status);

struct RunReport {
  std::vector<IterationRecord> iterations;
  ControlPath control;
  double phi = 0.0;
  double grad_norm = 0.0;
  double residual = 0.0;
  RunStatus status = RunStatus::max_iterations;
  std::size_t paths = 0;
  std::vector<std::uint64_t> seeds;
};

/// Projected gradient descent u <- P_K(u - s eta / 2) with Armijo
/// backtracking on Phi, or the damped fixed-point iteration
/// u <- (1 - theta) u + theta P_K(coupling / gamma2) (requires gamma3 = 0).
/// Both stop when r(u) <= tol. Iteration i of the history records the
/// evaluation at the i-th iterate.
RunReport optimize(const ControlPath& u0, const ControlProblem& problem,
                   const OptimizerOptions& options);

}  // namespace nlsctl

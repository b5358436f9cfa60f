#include "nlsctl/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "nlsctl/errors.hpp"

namespace nlsctl {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged:
      return "converged";
    case RunStatus::max_iterations:
      return "max_iterations";
    case RunStatus::stalled:
      return "stalled";
  }
  return "unknown";
}

namespace {

ControlPath axpy(const ControlPath& x, double a, const ControlPath& y) {
  ControlPath out = x;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += a * y.values[i];
  return out;
}

}  // namespace

RunReport optimize(const ControlPath& u0, const ControlProblem& problem,
                   const OptimizerOptions& options) {
  problem.validate();
  const auto& k_set = *problem.params.admissible;
  const double gamma2 = problem.weights.gamma2;
  if (!u0.is_admissible(k_set)) throw ValidationError("initial control is not in K");
  if (options.method == OptimizerMethod::fixed_point) {
    if (problem.weights.gamma3 != 0.0) {
      throw ValidationError("fixed-point iteration requires gamma3 = 0");
    }
    if (!(options.theta > 0.0 && options.theta <= 1.0)) {
      throw ValidationError("fixed-point damping theta must lie in (0, 1]");
    }
  }

  RunReport report;
  report.paths = problem.sample_count();
  report.seeds = problem.seeds;

  ControlPath u = u0;
  GradientEvaluation eval = evaluate_gradient(u, problem);
  double step = options.initial_step > 0.0 ? options.initial_step : 1.0 / gamma2;
  double last_step = 0.0;
  std::size_t last_backtracks = 0;

  for (std::size_t it = 0;; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    rec.phi = eval.value.phi;
    rec.grad_norm = control_norm(eval.eta);
    rec.residual = problem.weights.gamma3 == 0.0
                       ? optimality_residual(u, eval.coupling, gamma2, k_set)
                       : projected_gradient_residual(u, eval.eta, gamma2, k_set);
    rec.step = last_step;
    rec.backtracks = last_backtracks;
    report.iterations.push_back(rec);

    if (rec.residual <= options.tol) {
      report.status = RunStatus::converged;
      break;
    }
    if (it >= options.max_iter) {
      report.status = RunStatus::max_iterations;
      break;
    }

    if (options.method == OptimizerMethod::fixed_point) {
      const ControlPath target = fixed_point_map(eval.coupling, gamma2, k_set);
      ControlPath next = u;
      for (std::size_t i = 0; i < next.values.size(); ++i) {
        next.values[i] = (1.0 - options.theta) * u.values[i] + options.theta * target.values[i];
      }
      u = std::move(next);
      eval = evaluate_gradient(u, problem);
      last_step = options.theta;
      last_backtracks = 0;
      continue;
    }

    const ControlPath previous = u;
    bool accepted = false;
    double trial = step;
    std::size_t backtracks = 0;
    for (; backtracks <= options.max_backtracks; ++backtracks, trial *= 0.5) {
      ControlPath candidate = project_K(axpy(u, -0.5 * trial, eval.eta), k_set);
      const ControlPath move = axpy(candidate, -1.0, u);
      if (control_norm(move) == 0.0) break;
      const double slope = control_inner(eval.eta, move);
      const double phi = objective(candidate, problem).phi;
      if (phi <= eval.value.phi + options.armijo_sigma * slope && phi <= eval.value.phi) {
        u = std::move(candidate);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.status = RunStatus::stalled;
      break;
    }
    GradientEvaluation next = evaluate_gradient(u, problem);
    last_step = trial;
    last_backtracks = backtracks;
    // Barzilai-Borwein trial step for the next iteration. The update moves
    // along eta / 2, so the curvature pair uses half the gradient change.
    const ControlPath du = axpy(u, -1.0, previous);
    const ControlPath dg = axpy(next.eta, -1.0, eval.eta);
    const double curvature = 0.5 * control_inner(du, dg);
    step = curvature > 0.0 ? std::clamp(control_inner(du, du) / curvature, 1e-10 * trial, 1e10 * trial)
                           : 2.0 * trial;
    eval = std::move(next);
  }

  report.control = u;
  report.phi = report.iterations.back().phi;
  report.grad_norm = report.iterations.back().grad_norm;
  report.residual = report.iterations.back().residual;
  return report;
}

}  // namespace nlsctl

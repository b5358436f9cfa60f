#include "nlsctl/objective.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "nlsctl/errors.hpp"
#include "nlsctl/norms.hpp"
#include "parallel.hpp"

namespace nlsctl {

void ObjectiveWeights::validate() const {
  if (!(gamma1 >= 0.0)) throw ValidationError("gamma1 must be >= 0");
  if (!(gamma2 > 0.0)) throw ValidationError("gamma2 must be > 0");
  if (!(gamma3 >= 0.0)) throw ValidationError("gamma3 must be >= 0");
}

void ControlProblem::validate() const {
  weights.validate();
  time.validate();
  control_time.validate();
  params.validate(x0.grid);
  if (!params.admissible) throw ValidationError("control problem needs an admissible set K");
  require_same_grid(x0.grid, targets.terminal.grid);
  if (std::abs(control_time.final_time - time.final_time) > 1e-12) {
    throw ShapeError("control and state grids cover different intervals");
  }
  if (weights.gamma1 > 0.0) {
    if (!targets.tracking) throw ValidationError("gamma1 > 0 needs a tracking target");
    if (!targets.tracking->dense() || !(targets.tracking->time == time)) {
      throw ShapeError("tracking target must be stored on every state node");
    }
  }
  if (noise) {
    noise->validate(x0.grid.dimension());
    for (const auto& p : paths) {
      if (!(p.time == time) || p.channels != noise->channels()) {
        throw ShapeError("Wiener path does not match the state time grid or channel count");
      }
    }
  }
}

double control_energy(const ControlPath& u, double gamma2) {
  return gamma2 * control_inner(u, u);
}

double control_smoothness(const ControlPath& u, double gamma3) {
  if (gamma3 == 0.0) return 0.0;
  const double ds = u.time.dt();
  double s = 0.0;
  for (std::size_t k = 0; k < u.time.steps; ++k) {
    for (std::size_t j = 0; j < u.channels; ++j) {
      const double d = u.at(k + 1, j) - u.at(k, j);
      s += d * d / ds;
    }
  }
  return gamma3 * s;
}

namespace {

struct PathTerms {
  double terminal = 0.0;
  double tracking = 0.0;
  std::optional<ControlPath> coupling;
};

double squared_distance(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return s * a.grid.cell_volume();
}

PathTerms evaluate_path(const ControlPath& u, const ControlProblem& problem, std::size_t index,
                        bool with_adjoint) {
  std::optional<PhaseField> phase;
  if (problem.stochastic()) phase.emplace(problem.x0.grid, *problem.noise, problem.paths[index]);
  const PhaseField* ph = phase ? &*phase : nullptr;

  const Trajectory fwd = solve_forward(problem.x0, problem.params, u, problem.time, ph);
  PathTerms out;
  out.terminal = squared_distance(fwd.fields.back(), problem.targets.terminal);
  if (problem.weights.gamma1 > 0.0) {
    double s = 0.0;
    for (std::size_t k = 0; k < fwd.size(); ++k) {
      s += problem.time.trapezoid_weight(k) *
           squared_distance(fwd.fields[k], problem.targets.tracking->fields[k]);
    }
    out.tracking = problem.weights.gamma1 * s;
  }
  if (with_adjoint) {
    out.coupling = solve_backward(fwd, problem.params, u, problem.targets, problem.weights.gamma1,
                                  problem.adjoint_mode, ph, problem.trunc)
                       .coupling;
  }
  return out;
}

ObjectiveValue reduce(const ControlPath& u, const ControlProblem& problem,
                      const std::vector<PathTerms>& terms) {
  ObjectiveValue v;
  v.energy = control_energy(u, problem.weights.gamma2);
  v.smoothness = control_smoothness(u, problem.weights.gamma3);
  const double n = static_cast<double>(terms.size());
  for (const auto& t : terms) {
    v.terminal += t.terminal;
    v.tracking += t.tracking;
    v.per_path.push_back(t.terminal + t.tracking + v.energy + v.smoothness);
  }
  v.terminal /= n;
  v.tracking /= n;
  v.phi = v.terminal + v.tracking + v.energy + v.smoothness;
  if (terms.size() > 1) {
    double ss = 0.0;
    for (double p : v.per_path) ss += (p - v.phi) * (p - v.phi);
    v.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return v;
}

std::vector<PathTerms> run_paths(const ControlPath& u, const ControlProblem& problem,
                                 bool with_adjoint) {
  problem.validate();
  const std::size_t count = problem.sample_count();
  std::vector<std::optional<PathTerms>> slots(count);
  detail::parallel_for(count, [&](std::size_t i) { slots[i] = evaluate_path(u, problem, i, with_adjoint); });
  std::vector<PathTerms> terms;
  terms.reserve(count);
  for (auto& s : slots) terms.push_back(std::move(*s));
  return terms;
}

}  // namespace

ObjectiveValue objective(const ControlPath& u, const ControlProblem& problem) {
  return reduce(u, problem, run_paths(u, problem, false));
}

GradientEvaluation evaluate_gradient(const ControlPath& u, const ControlProblem& problem) {
  const auto terms = run_paths(u, problem, true);
  GradientEvaluation g{reduce(u, problem, terms), ControlPath::zeros(u.time, u.channels),
                       ControlPath::zeros(u.time, u.channels)};
  const double n = static_cast<double>(terms.size());
  for (const auto& t : terms) {
    for (std::size_t i = 0; i < g.coupling.values.size(); ++i) {
      g.coupling.values[i] += t.coupling->values[i] / n;
    }
  }
  AdjointState mean_state{Trajectory(problem.x0.grid), g.coupling, problem.adjoint_mode};
  g.eta = gradient_eta(u, mean_state, problem.weights.gamma2, problem.weights.gamma3);
  return g;
}

ControlPath fixed_point_map(const ControlPath& coupling, double gamma2, const AdmissibleSet& k_set) {
  ControlPath target = coupling;
  for (auto& v : target.values) v /= gamma2;
  return project_K(target, k_set);
}

double optimality_residual(const ControlPath& u, const ControlPath& coupling, double gamma2,
                           const AdmissibleSet& k_set) {
  ControlPath diff = fixed_point_map(coupling, gamma2, k_set);
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = u.values[i] - diff.values[i];
  return control_norm(diff);
}

double projected_gradient_residual(const ControlPath& u, const ControlPath& eta, double gamma2,
                                   const AdmissibleSet& k_set) {
  ControlPath step = u;
  for (std::size_t i = 0; i < step.values.size(); ++i) step.values[i] -= eta.values[i] / (2.0 * gamma2);
  step = project_K(step, k_set);
  for (std::size_t i = 0; i < step.values.size(); ++i) step.values[i] = u.values[i] - step.values[i];
  return control_norm(step);
}

double optimality_residual(const ControlPath& u, const AdjointState& adjoint, double gamma2,
                           const AdmissibleSet& k_set) {
  return optimality_residual(u, adjoint.coupling, gamma2, k_set);
}

}  // namespace nlsctl

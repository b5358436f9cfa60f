#include "nlsctl_cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "nlsctl/errors.hpp"
#include "nlsctl/io.hpp"
#include "nlsctl/norms.hpp"
#include "nlsctl/optimize.hpp"
#include "nlsctl/stability.hpp"
#include "nlsctl/upvp.hpp"

namespace nlsctl::cli {
namespace {

struct Context {
  const RunConfig& config;
  std::filesystem::path out;
  std::string hash;
  std::vector<std::uint64_t> seeds;
  ScenarioResult result;

  io::Provenance provenance() const { return {hash, config.mc.base_seed}; }

  // Header shared by every JSON artifact.
  Json header(const std::string& command) const {
    return {{"command", command},
            {"config", to_json(config)},
            {"config_hash", hash},
            {"base_seed", config.mc.base_seed},
            {"seeds", seeds}};
  }

  std::filesystem::path file(const std::string& name) {
    result.files.push_back(name);
    return out / name;
  }

  void write_json(const std::string& name, const Json& doc) {
    std::ofstream os(file(name));
    if (!os) throw Error("cannot write " + (out / name).string());
    os << doc.dump(2) << '\n';
  }

  std::ofstream open_csv(const std::string& name) {
    std::ofstream os(file(name));
    if (!os) throw Error("cannot write " + (out / name).string());
    os << std::setprecision(17);
    os << "# config_hash=" << hash << ",base_seed=" << config.mc.base_seed << '\n';
    return os;
  }
};

// Either no phase or the phase of Monte-Carlo path 0.
std::optional<PhaseField> first_phase(const ControlProblem& problem) {
  if (!problem.stochastic()) return std::nullopt;
  return PhaseField(problem.x0.grid, *problem.noise, problem.paths.front());
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(); }

void run_forward(Context& ctx) {
  const auto& c = ctx.config;
  const ControlProblem problem = build_problem(c);
  const auto phase = first_phase(problem);
  const ControlPath u = build_control(c, c.control.u0);
  ForwardOptions fo;
  fo.stride = c.time.stride;
  fo.blowup_threshold = c.time.blowup_threshold;
  const Trajectory traj = solve_forward(problem.x0, problem.params, u, problem.time,
                                        phase ? &*phase : nullptr, fo);

  io::Provenance prov = ctx.provenance();
  io::write_trajectory_csv(ctx.file("trajectory.csv"), traj, &prov);
  io::write_trajectory_binary(ctx.file("trajectory.bin"), traj);
  if (phase) io::write_path_csv(ctx.file("path.csv"), phase->path(), &prov);

  const double m0 = lp_norm(traj.fields.front(), 2.0);
  double drift = 0.0;
  for (const auto& f : traj.fields) drift = std::max(drift, std::abs(lp_norm(f, 2.0) / m0 - 1.0));

  const int d = c.grid.d;
  const double p = c.model.alpha + 1.0;
  const double q = 4.0 * (c.model.alpha + 1.0) / (d * (c.model.alpha - 1.0));
  Json doc = ctx.header("forward");
  doc["mass_initial"] = m0 * m0;
  doc["mass_final"] = std::pow(lp_norm(traj.fields.back(), 2.0), 2);
  doc["max_relative_l2_drift"] = drift;
  doc["strichartz"] = {{"p", p}, {"q", q},
                       {"value", finite_or_null(trajectory_norm(traj, norm_kind::LqLp{q, p, true}))}};
  doc["local_smoothing"] = trajectory_norm(traj, norm_kind::LocalSmoothing{});
  doc["linf_l2"] = trajectory_norm(traj, norm_kind::LqLp{kInfinity, 2.0, false});
  doc["terminal_l2"] = trajectory_norm(traj, norm_kind::TerminalL2{});
  doc["stored_nodes"] = traj.size();
  ctx.write_json("forward.json", doc);
}

Json iterations_json(const RunReport& report) {
  Json it = Json::array();
  for (const auto& r : report.iterations) {
    it.push_back({{"iteration", r.iteration}, {"phi", r.phi}, {"grad_norm", r.grad_norm},
                  {"residual", r.residual}, {"step", r.step}, {"backtracks", r.backtracks}});
  }
  return it;
}

void run_optimize(Context& ctx) {
  const auto& c = ctx.config;
  const ControlProblem problem = build_problem(c);
  const ControlPath u0 = build_control(c, c.control.u0);
  const RunReport report = optimize(u0, problem, build_optimizer(c));
  const ObjectiveValue value = objective(report.control, problem);

  Json doc = ctx.header("optimize");
  doc["iterations"] = iterations_json(report);
  doc["phi"] = report.phi;
  doc["grad_norm"] = report.grad_norm;
  doc["residual"] = report.residual;
  doc["step"] = report.iterations.empty() ? 0.0 : report.iterations.back().step;
  doc["status"] = to_string(report.status);
  doc["paths"] = report.paths;
  doc["breakdown"] = {{"terminal", value.terminal}, {"tracking", value.tracking},
                      {"energy", value.energy}, {"smoothness", value.smoothness},
                      {"std_error", value.std_error}};
  if (c.optimizer.per_path_gap && problem.stochastic()) {
    // Each path gets its own optimal control; their mean objective bounds
    // the common-control optimum from below.
    Json per_path = Json::array();
    double oracle = 0.0;
    for (std::size_t i = 0; i < problem.paths.size(); ++i) {
      ControlProblem single = problem;
      single.paths = {problem.paths[i]};
      single.seeds = {problem.seeds[i]};
      const RunReport r = optimize(u0, single, build_optimizer(c));
      per_path.push_back({{"seed", problem.seeds[i]}, {"phi", r.phi}, {"status", to_string(r.status)}});
      oracle += r.phi;
    }
    oracle /= static_cast<double>(problem.paths.size());
    doc["per_path_gap"] = {{"common_phi", report.phi}, {"oracle_mean_phi", oracle},
                           {"gap", report.phi - oracle}, {"paths", per_path}};
  }
  ctx.write_json("report.json", doc);
  const io::Provenance prov = ctx.provenance();
  io::write_control_csv(ctx.file("control.csv"), report.control, &prov);
}

void run_gradcheck(Context& ctx) {
  const auto& c = ctx.config;
  const ControlProblem problem = build_problem(c);
  const ControlPath u = build_control(c, c.control.u0);
  const GradientEvaluation grad = evaluate_gradient(u, problem);
  const double h = c.gradcheck.epsilon;

  auto os = ctx.open_csv("gradcheck.csv");
  os << "node,t,channel,adjoint,fd,abs_err,rel_err\n";
  double max_abs = 0.0, max_rel = 0.0;
  for (std::size_t k = 0; k < u.nodes(); ++k) {
    for (std::size_t j = 0; j < u.channels; ++j) {
      // Fourth-order central difference of Phi along node k, channel j.
      auto phi = [&](double s) {
        ControlPath v = u;
        v.at(k, j) += s;
        return objective(v, problem).phi;
      };
      const double fd = (8.0 * (phi(h) - phi(-h)) - (phi(2 * h) - phi(-2 * h))) / (12.0 * h);
      const double adj = grad.eta.at(k, j) * u.time.trapezoid_weight(k);
      const double abs_err = std::abs(adj - fd);
      const double rel_err = abs_err / std::max(std::abs(fd), 1e-300);
      max_abs = std::max(max_abs, abs_err);
      max_rel = std::max(max_rel, rel_err);
      os << k << ',' << u.time.time(k) << ',' << j + 1 << ',' << adj << ',' << fd << ','
         << abs_err << ',' << rel_err << '\n';
    }
  }
  Json doc = ctx.header("gradcheck");
  doc["epsilon"] = h;
  doc["adjoint_mode"] = c.adjoint.mode;
  doc["phi"] = grad.value.phi;
  doc["max_abs_err"] = max_abs;
  doc["max_rel_err"] = max_rel;
  ctx.write_json("gradcheck.json", doc);
}

Json path_diagnostics(const Trajectory& traj, const GaugeSpec& gauge, double p) {
  const auto path = as_sampled_path(traj);
  const EmbeddingCheck besov = besov_embedding_check(path, p);
  Json j = {{"v2_norm", vp_norm(path, 2.0)}, {"vp_norm", vp_norm(path, p)}, {"p", p},
            {"besov_max_ratio", besov.max_ratio}, {"besov_bound", besov.bound},
            {"besov_pass", besov.pass}};
  try {
    const TemporalRegularity reg = temporal_regularity(traj, gauge);
    j["temporal_sup"] = reg.sup_value;
    j["h_profile"] = Json::array();
    for (std::size_t i = 0; i < reg.shifts.size(); ++i) {
      j["h_profile"].push_back({{"h", reg.shifts[i]}, {"value", reg.profile[i]}});
    }
  } catch (const UnsupportedModeError& e) {
    j["temporal_sup"] = nullptr;
    j["h_profile"] = Json::array();
    j["temporal_note"] = e.what();
  }
  return j;
}

void run_diagnose(Context& ctx) {
  const auto& c = ctx.config;
  const ControlProblem problem = build_problem(c);
  const auto phase = first_phase(problem);
  const GaugeSpec gauge{phase ? &*phase : nullptr};
  Json doc = ctx.header("diagnose");
  doc["source"] = c.diagnose.source;

  if (c.diagnose.source == "file") {
    std::filesystem::path p(c.diagnose.path);
    if (p.is_relative() && !c.base_dir.empty()) p = c.base_dir / p;
    const Trajectory traj = io::read_trajectory_binary(p);
    const bool matches = phase && traj.time == phase->time();
    doc["forward"] = path_diagnostics(traj, GaugeSpec{matches ? &*phase : nullptr}, c.diagnose.p);
  } else {
    const ControlPath u = build_control(c, c.control.u0);
    const Trajectory traj = solve_forward(problem.x0, problem.params, u, problem.time,
                                          phase ? &*phase : nullptr);
    doc["forward"] = path_diagnostics(traj, gauge, c.diagnose.p);
    if (c.diagnose.include_adjoint) {
      const AdjointState adj =
          solve_backward(traj, problem.params, u, problem.targets, problem.weights.gamma1,
                         AdjointMode::discrete_adjoint, phase ? &*phase : nullptr, problem.trunc);
      doc["adjoint"] = path_diagnostics(adj.y, gauge, c.diagnose.p);
    }
  }
  // Flat summary keys for the forward trajectory.
  for (const char* key : {"v2_norm", "temporal_sup", "h_profile", "besov_max_ratio"}) {
    doc[key] = doc["forward"][key];
  }
  ctx.write_json("diagnostics.json", doc);
}

void run_stability(Context& ctx) {
  const auto& c = ctx.config;
  const ControlProblem problem = build_problem(c);
  const ControlPath u = build_control(c, c.control.u0);
  StabilityInputs inputs{build_control(c, c.stability.control_direction), std::nullopt,
                         std::nullopt, std::nullopt};
  // The direction is a displacement, so undo the projection applied to
  // ordinary controls when K does not contain it.
  if (c.control.K) {
    const auto& s = c.stability.control_direction;
    RunConfig free = c;
    free.control.K.reset();
    inputs.control_direction = build_control(free, s);
  }
  if (problem.stochastic()) {
    inputs.noise = problem.noise;
    inputs.path = problem.paths.front();
    WienerPath dir = sample_path(*problem.noise, problem.time.final_time, problem.time.steps,
                                 *c.stability.path_seed);
    for (auto& b : dir.beta) b *= c.stability.path_scale;
    inputs.path_direction = std::move(dir);
  }
  const auto levels =
      stability_sweep(problem.x0, problem.params, u, problem.time, inputs, c.stability.levels);

  auto os = ctx.open_csv("stability.csv");
  os << "level,scale,control_gap,path_gap,perturbation,state_error\n";
  Json rows = Json::array();
  bool monotone = true;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto& s = levels[l];
    const double pert = s.control_gap + s.path_gap;
    os << l << ',' << s.scale << ',' << s.control_gap << ',' << s.path_gap << ',' << pert << ','
       << s.state_error << '\n';
    rows.push_back({{"level", l}, {"scale", s.scale}, {"control_gap", s.control_gap},
                    {"path_gap", s.path_gap}, {"perturbation", pert},
                    {"state_error", s.state_error}});
    if (l > 0 && s.state_error > 1.05 * levels[l - 1].state_error) monotone = false;
  }
  Json doc = ctx.header("stability");
  doc["levels"] = rows;
  doc["monotone_within_5_percent"] = monotone;
  ctx.write_json("stability.json", doc);
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
  if (name == "forward") return Subcommand::forward;
  if (name == "optimize") return Subcommand::optimize;
  if (name == "gradcheck") return Subcommand::gradcheck;
  if (name == "diagnose") return Subcommand::diagnose;
  if (name == "stability") return Subcommand::stability;
  throw ConfigError("<command>", "unknown subcommand '" + name + "'");
}

std::string to_string(Subcommand command) {
  switch (command) {
    case Subcommand::forward: return "forward";
    case Subcommand::optimize: return "optimize";
    case Subcommand::gradcheck: return "gradcheck";
    case Subcommand::diagnose: return "diagnose";
    case Subcommand::stability: return "stability";
  }
  return "unknown";
}

ScenarioResult run_scenario(const RunConfig& config, Subcommand command,
                            const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  Context ctx{config, out, config_hash(config), path_seeds(config), {}};
  switch (command) {
    case Subcommand::forward: run_forward(ctx); break;
    case Subcommand::optimize: run_optimize(ctx); break;
    case Subcommand::gradcheck: run_gradcheck(ctx); break;
    case Subcommand::diagnose: run_diagnose(ctx); break;
    case Subcommand::stability: run_stability(ctx); break;
  }
  Json manifest = ctx.header(to_string(command));
  manifest.erase("config");
  manifest["files"] = ctx.result.files;
  std::ofstream os(out / "manifest.json");
  os << manifest.dump(2) << '\n';
  ctx.result.files.push_back("manifest.json");
  return ctx.result;
}

}  // namespace nlsctl::cli

// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "nlsctl/adjoint.hpp"
#include "nlsctl/norms.hpp"
#include "nlsctl/objective.hpp"
#include "nlsctl/optimize.hpp"
#include "nlsctl/spectral.hpp"
#include "nlsctl/stability.hpp"
#include "nlsctl/tangent.hpp"
#include "nlsctl/upvp.hpp"

using namespace nlsctl;
using namespace nlsctl::testing;

namespace {

// Tolerances.
constexpr double kMassTol = 1e-10;
constexpr double kGaugeTol = 1e-12;
constexpr double kGradientTol = 1e-7;
constexpr double kContinuousOrderMin = 1.0;
constexpr double kFirstOrderSlope = 1.0;
constexpr double kFirstOrderBand = 0.2;
constexpr double kDualityTol = 1e-3;
constexpr double kResidualTol = 1e-4;
constexpr std::size_t kMaxIterations = 200;
const double kBesovBound = std::pow(2.0, 1.5);
constexpr double kRegularityTol = 0.10;
constexpr double kStabilitySlack = 1.05;
constexpr double kStrangMin = 1.7;
constexpr double kStrangMax = 2.2;

const SpatialGrid kGrid(1, 64, 16.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

ControlPath random_control(const TimeGrid& t, std::size_t channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  ControlPath u = ControlPath::zeros(t, channels);
  for (auto& v : u.values) v = unit(rng);
  return u;
}

Trajectory zero_like(const Trajectory& t) {
  Trajectory z = t;
  for (auto& f : z.fields) f = ComplexField(t.grid);
  return z;
}

// 1. Pathwise mass conservation under conservative noise.
Outcome mass_conservation() {
  ModelParams p = cubic_model(kGrid, 2);
  p.admissible = AdmissibleSet::box({-1.0, -1.0}, {1.0, 1.0});
  const ComplexField x0 = wave_packet(kGrid, -1.0, 1.0, 1.5);
  const TimeGrid time{1.0, 400};
  const NoiseModel noise = bump_noise(kGrid, 0.8);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 16; ++s) {
    const PhaseField phase(kGrid, noise, sample_path(noise, 1.0, 400, derive_seed(101, s)));
    const auto traj = solve_forward(x0, p, random_control(TimeGrid{1.0, 20}, 2, s), time, &phase);
    const double m0 = lp_norm(x0, 2.0);
    for (const auto& f : traj.fields) worst = std::max(worst, std::abs(lp_norm(f, 2.0) / m0 - 1.0));
  }
  return {worst <= kMassTol, fmt("max relative mass drift %.3e over 16 paths (tol %.0e)", worst, kMassTol)};
}

// 2. Constant profiles: the stochastic solution is e^{W} times the deterministic one.
Outcome gauge_oracle() {
  const ModelParams p = cubic_model(kGrid, 1);
  const ComplexField x0 = wave_packet(kGrid, 0.0, 1.2, 1.0);
  const TimeGrid time{1.0, 400};
  const ControlPath u = smooth_control(TimeGrid{1.0, 20}, 1, 0.6);
  const NoiseModel noise = constant_noise(2, 0.9);
  const auto det = solve_forward(x0, p, u, time);
  const double scale = lp_norm(x0, kInfinity);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const PhaseField phase(kGrid, noise, sample_path(noise, 1.0, 400, derive_seed(202, s)));
    const auto sto = solve_forward(x0, p, u, time, &phase);
    for (std::size_t k = 0; k < sto.size(); ++k) {
      const auto e = gauge_factor(phase, k, 1);
      for (std::size_t i = 0; i < kGrid.size(); ++i) {
        worst = std::max(worst, std::abs(sto.fields[k][i] - e[i] * det.fields[k][i]));
      }
    }
  }
  const double bound = kGaugeTol * scale;
  return {worst <= bound, fmt("max pointwise gap %.3e over 8 paths (bound %.3e)", worst, bound)};
}

// 3. Discrete-adjoint gradient vs finite differences, continuous vs discrete order.
Outcome gradient_correctness() {
  const auto ref = reference_tracking_problem(kReferenceSeed, 0);
  const ControlProblem& problem = ref.problem;
  const ControlPath u = smooth_control(problem.control_time, 1, 0.3, 0.5);
  const auto g = evaluate_gradient(u, problem);
  double worst = 0.0;
  const double h = 1e-3;
  for (std::size_t k = 0; k < u.nodes(); ++k) {
    auto phi = [&](double s) {
      ControlPath v = u;
      v.at(k, 0) += s;
      return objective(v, problem).phi;
    };
    const double fd = (8.0 * (phi(h) - phi(-h)) - (phi(2 * h) - phi(-2 * h))) / (12.0 * h);
    const double ad = g.eta.at(k, 0) * u.time.trapezoid_weight(k);
    worst = std::max(worst, std::abs(ad - fd) / std::abs(fd));
  }

  std::vector<double> gaps;
  for (std::size_t m : {100, 200, 400, 800}) {
    ControlProblem pm = problem;
    pm.time = TimeGrid{1.0, m};
    pm.targets.tracking =
        solve_forward(pm.x0, pm.params, ControlPath::zeros(u.time, 1), pm.time);
    const auto gd = evaluate_gradient(u, pm).eta;
    pm.adjoint_mode = AdjointMode::continuous;
    const auto gc = evaluate_gradient(u, pm).eta;
    ControlPath diff = gd;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= gc.values[i];
    gaps.push_back(control_norm(diff));
  }
  const double order =
      std::log2(gaps.front() / gaps.back()) / static_cast<double>(gaps.size() - 1);
  const bool pass = worst <= kGradientTol && order >= kContinuousOrderMin;
  return {pass, fmt("max node relative error %.3e (tol 1e-7); ", worst) +
                    fmt("continuous-vs-discrete order %.3f (min %.1f)", order, kContinuousOrderMin)};
}

// 4. Slope of the linearization remainder.
Outcome first_order_expansion() {
  const ModelParams p = cubic_model(kGrid, 1);
  const TimeGrid time{0.5, 100};
  const ControlPath u = smooth_control(TimeGrid{0.5, 10}, 1, 0.4);
  const ControlPath du = smooth_control(u.time, 1, 1.0, 1.3);
  const ComplexField x0 = wave_packet(kGrid, 0.0, 1.0, 1.0);
  const auto x = solve_forward(x0, p, u, time);
  const auto phi = solve_variational(x, p, u, ControlDirection{du});
  std::vector<double> err;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    ControlPath ue = u;
    for (std::size_t i = 0; i < ue.values.size(); ++i) ue.values[i] += eps * du.values[i];
    const auto xe = solve_forward(x0, p, ue, time);
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      ComplexField d = xe.fields[k] - x.fields[k];
      d *= 1.0 / eps;
      m = std::max(m, lp_norm(d - phi.fields[k], 2.0));
    }
    err.push_back(m);
  }
  const double slope = std::log10(err.front() / err.back()) / 3.0;
  return {std::abs(slope - kFirstOrderSlope) <= kFirstOrderBand,
          fmt("slope %.4f (target 1 +- %.1f)", slope, kFirstOrderBand)};
}

// 5. Duality between the variational and backward equations at dt = 1e-3.
Outcome duality() {
  const ModelParams p = cubic_model(kGrid, 1);
  const ComplexField x0 = wave_packet(kGrid, -0.5, 1.0, 1.0);
  const ControlPath u = smooth_control(TimeGrid{1.0, 20}, 1, 0.3);
  const TimeGrid time{1.0, 1000};
  const double gamma1 = 0.5;
  const auto x = solve_forward(x0, p, u, time);
  const TargetData targets{wave_packet(kGrid, 1.0, 0.8),
                           solve_forward(x0, p, ControlPath::zeros(u.time, 1), time)};
  const auto adj = solve_backward(x, p, u, targets, gamma1, AdjointMode::discrete_adjoint);

  double worst = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    Trajectory src = zero_like(x);
    const auto base = random_field(kGrid, 500 + s, 1.5 + 0.5 * static_cast<double>(s));
    for (std::size_t k = 0; k < src.size(); ++k) {
      src.fields[k] = base;
      src.fields[k] *= std::polar(1.0 + 0.5 * std::sin(7.0 * x.time_at(k)),
                                  (2.0 + static_cast<double>(s)) * x.time_at(k));
    }
    const auto psi = solve_variational(x, p, u, FieldSource{src});
    double lam = l2_inner(x.fields.back() - targets.terminal, psi.fields.back()).real();
    double pair = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double w = time.trapezoid_weight(k);
      lam += gamma1 * w * l2_inner(x.fields[k] - targets.tracking->fields[k], psi.fields[k]).real();
      pair += w * l2_inner(src.fields[k], adj.y.fields[k]).real();
    }
    worst = std::max(worst, std::abs(pair - lam) / std::abs(lam));
  }
  return {worst <= kDualityTol, fmt("max relative defect %.3e over 5 sources (tol %.0e)", worst, kDualityTol)};
}

// 6. Reference tracking problem reaches the optimality certificate.
Outcome optimality_certificate() {
  const auto ref = reference_tracking_problem();
  OptimizerOptions opts;
  opts.tol = kResidualTol;
  opts.max_iter = kMaxIterations;
  const auto report = optimize(ref.u0, ref.problem, opts);
  bool monotone = true;
  for (std::size_t i = 1; i < report.iterations.size(); ++i) {
    if (report.iterations[i].phi > report.iterations[i - 1].phi) monotone = false;
  }
  const bool pass = report.residual <= kResidualTol && report.iterations.size() <= kMaxIterations + 1 &&
                    report.status == RunStatus::converged && monotone;
  return {pass, fmt("residual %.3e after %.0f iterations", report.residual,
                    static_cast<double>(report.iterations.size() - 1)) +
                    (monotone ? ", Phi non-increasing" : ", Phi increased")};
}

// 7. DP equals brute-force partition enumeration.
Outcome vp_exactness() {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> len(2, 13);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SampledPath<double> path;
    const int nodes = len(rng);
    for (int k = 0; k < nodes; ++k) {
      path.times.push_back(0.1 * k);
      path.values.push_back(normal(rng));
    }
    const std::size_t m = path.values.size() - 1;
    double best = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      double s = 0.0;
      std::size_t last = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask & (std::size_t{1} << i)) {
          s += std::pow(std::abs(path.values[i + 1] - path.values[last]), 2.0);
          last = i + 1;
        }
      }
      best = std::max(best, s);
    }
    if (vp_norm(path, 2.0) != std::sqrt(best)) ++mismatches;
  }
  return {mismatches == 0, fmt("%.0f mismatches in 200 trials", static_cast<double>(mismatches))};
}

// 8. Besov embedding ratio bound.
Outcome besov_embedding() {
  std::mt19937_64 rng(88);
  std::normal_distribution<double> normal;
  double scalar_max = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    SampledPath<double> path;
    double x = 0.0;
    for (int k = 0; k < 40; ++k) {
      path.times.push_back(0.025 * k);
      path.values.push_back(x);
      x += trial % 2 == 0 ? normal(rng) : normal(rng) * normal(rng) * normal(rng);
    }
    scalar_max = std::max(scalar_max, besov_embedding_check(path, 2.0).max_ratio);
  }
  const ModelParams p = cubic_model(kGrid, 1);
  const NoiseModel noise = constant_noise(1, 0.5);
  double field_max = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const TimeGrid time{1.0, 100};
    const PhaseField phase(kGrid, noise, sample_path(noise, 1.0, 100, derive_seed(303, s)));
    const auto traj = solve_forward(wave_packet(kGrid, -1.0 + 0.2 * s, 1.0, 1.0), p,
                                    random_control(TimeGrid{1.0, 10}, 1, s), time, &phase);
    field_max = std::max(field_max, besov_embedding_check(as_sampled_path(traj), 2.0).max_ratio);
  }
  const bool pass = scalar_max <= kBesovBound && field_max <= kBesovBound;
  return {pass, fmt("max ratio %.4f scalar, ", scalar_max) +
                    fmt("%.4f field (bound %.4f)", field_max, kBesovBound)};
}

// 9. Temporal regularity under one dt halving with common noise.
Outcome temporal_regularity_check() {
  const ModelParams p = cubic_model(kGrid, 1);
  const ComplexField x0 = wave_packet(kGrid, -1.0, 1.2, 1.0);
  const ControlPath u = smooth_control(TimeGrid{1.0, 20}, 1, 0.3);
  const NoiseModel noise = constant_noise(1, 0.3);
  const WienerPath coarse = sample_path(noise, 1.0, 200, derive_seed(kReferenceSeed, 0));
  const WienerPath fine = refine_path(coarse, derive_seed(kReferenceSeed, 99));

  auto measure = [&](const WienerPath& path, double& fwd, double& bwd) {
    const PhaseField phase(kGrid, noise, path);
    const auto x = solve_forward(x0, p, u, path.time, &phase);
    const TargetData targets{
        solve_forward(x0, p, smooth_control(u.time, 1, 0.8), path.time).fields.back(),
        solve_forward(x0, p, ControlPath::zeros(u.time, 1), path.time)};
    const auto adj = solve_backward(x, p, u, targets, 0.5, AdjointMode::discrete_adjoint, &phase);
    fwd = temporal_regularity(x, GaugeSpec{&phase}).sup_value;
    bwd = temporal_regularity(adj.y, GaugeSpec{&phase}).sup_value;
  };
  double f1, b1, f2, b2;
  measure(coarse, f1, b1);
  measure(fine, f2, b2);
  const double df = std::abs(f2 - f1) / f1;
  const double db = std::abs(b2 - b1) / b1;
  const bool pass = df <= kRegularityTol && db <= kRegularityTol;
  return {pass, fmt("forward sup %.5f -> ", f1) + fmt("%.5f, ", f2) + fmt("backward sup %.5f -> ", b1) +
                    fmt("%.5f; ", b2) + fmt("relative changes %.2e, %.2e (tol 0.10)", df, db)};
}

// 10. Continuous dependence over 5 halvings of the perturbation.
Outcome stability() {
  const ModelParams p = cubic_model(kGrid, 1);
  const ComplexField x0 = wave_packet(kGrid, -1.0, 1.2, 1.0);
  const TimeGrid time{1.0, 400};
  const ControlPath u = smooth_control(TimeGrid{1.0, 20}, 1, 0.3);
  const NoiseModel noise = constant_noise(1, 0.3);
  StabilityInputs inputs{smooth_control(u.time, 1, 0.5, 1.0), noise,
                         sample_path(noise, 1.0, 400, derive_seed(404, 0)),
                         sample_path(noise, 1.0, 400, derive_seed(404, 1))};
  const auto levels = stability_sweep(x0, p, u, time, inputs, 5);
  bool pass = levels.size() == 5;
  std::string detail = "state errors";
  for (std::size_t l = 0; l < levels.size(); ++l) {
    detail += fmt(" %.3e", levels[l].state_error);
    if (l > 0) {
      const double pert = levels[l].control_gap + levels[l].path_gap;
      const double prev = levels[l - 1].control_gap + levels[l - 1].path_gap;
      if (std::abs(pert / prev - 0.5) > 1e-12) pass = false;
      if (levels[l].state_error > kStabilitySlack * levels[l - 1].state_error) pass = false;
    }
  }
  return {pass, detail};
}

// 11. Strang splitting self-convergence.
Outcome strang_order() {
  const ModelParams p = cubic_model(kGrid, 1);
  const ComplexField x0 = wave_packet(kGrid, -1.0, 1.2, 1.0);
  const ControlPath u = smooth_control(TimeGrid{1.0, 20}, 1, 0.3);
  std::vector<ComplexField> finals;
  for (std::size_t m : {50, 100, 200, 400, 800}) {
    finals.push_back(solve_forward(x0, p, u, TimeGrid{1.0, m}).fields.back());
  }
  std::vector<double> err;
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) err.push_back(lp_norm(finals[i] - finals[i + 1], 2.0));
  const double slope = std::log2(err.front() / err.back()) / static_cast<double>(err.size() - 1);
  return {slope >= kStrangMin && slope <= kStrangMax,
          fmt("slope %.4f (range [%.1f, ", slope, kStrangMin) + fmt("%.1f])", kStrangMax)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"mass-conservation", mass_conservation},
      {"gauge-oracle", gauge_oracle},
      {"gradient-correctness", gradient_correctness},
      {"first-order-expansion", first_order_expansion},
      {"duality", duality},
      {"optimality-certificate", optimality_certificate},
      {"vp-dp-exactness", vp_exactness},
      {"besov-embedding", besov_embedding},
      {"temporal-regularity", temporal_regularity_check},
      {"stability-sweep", stability},
      {"split-step-order", strang_order},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %-24s %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", index++, name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

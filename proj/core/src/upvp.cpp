#include "nlsctl/upvp.hpp"

#include <algorithm>
#include <cmath>

#include "nlsctl/errors.hpp"
#include "nlsctl/norms.hpp"
#include "nlsctl/spectral.hpp"

namespace nlsctl {
namespace {

double field_distance(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.grid.cell_volume());
}

template <class T>
double uniform_step(const SampledPath<T>& path) {
  if (path.times.size() != path.values.size()) throw ShapeError("path times and values differ in length");
  if (path.times.size() < 2) throw UndefinedPathError("path needs at least two nodes");
  const double dt = path.times[1] - path.times[0];
  for (std::size_t k = 1; k + 1 < path.times.size(); ++k) {
    if (std::abs((path.times[k + 1] - path.times[k]) - dt) > 1e-9 * std::max(1.0, dt)) {
      throw ShapeError("path times must be uniform");
    }
  }
  return dt;
}

// Trapezoid weight of node k on a grid of `intervals` steps.
double trapezoid(std::size_t k, std::size_t intervals, double dt) {
  return (k == 0 || k == intervals) ? 0.5 * dt : dt;
}

}  // namespace

double vp_norm(std::size_t nodes, const PathDistance& distance, double p) {
  if (nodes < 2) throw UndefinedPathError("p-variation needs at least one increment (M >= 1)");
  if (!(p >= 1.0)) throw ValidationError("p-variation requires p >= 1");
  std::vector<double> best(nodes, 0.0);
  double top = 0.0;
  for (std::size_t i = 1; i < nodes; ++i) {
    double b = 0.0;
    for (std::size_t j = 0; j < i; ++j) b = std::max(b, best[j] + std::pow(distance(j, i), p));
    best[i] = b;
    top = std::max(top, b);
  }
  return std::pow(top, 1.0 / p);
}

double vp_norm(const SampledPath<double>& path, double p) {
  if (path.values.size() < 2) throw UndefinedPathError("p-variation needs at least one increment (M >= 1)");
  const auto& v = path.values;
  return vp_norm(v.size(), [&](std::size_t i, std::size_t j) { return std::abs(v[i] - v[j]); }, p);
}

double vp_norm(const SampledPath<ComplexField>& path, double p) {
  if (path.values.size() < 2) throw UndefinedPathError("p-variation needs at least one increment (M >= 1)");
  const auto& v = path.values;
  return vp_norm(v.size(), [&](std::size_t i, std::size_t j) { return field_distance(v[i], v[j]); }, p);
}

SampledPath<ComplexField> as_sampled_path(const Trajectory& traj) {
  return {traj.times(), traj.fields};
}

bool GaugeSpec::constant_profiles() const noexcept {
  return phase == nullptr || phase->constant_profiles();
}

TemporalRegularity temporal_regularity(const Trajectory& traj, const GaugeSpec& gauge) {
  if (!gauge.constant_profiles()) {
    throw UnsupportedModeError("temporal regularity needs constant noise profiles (U(0,t) = e^{it Laplacian})");
  }
  if (!traj.dense()) throw ShapeError("temporal regularity needs a densely stored trajectory");
  if (gauge.phase && !(gauge.phase->time() == traj.time)) {
    throw ShapeError("phase and trajectory use different time grids");
  }
  const std::size_t steps = traj.time.steps;
  const double dt = traj.time.dt();

  std::vector<ComplexField> frame;
  frame.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    ComplexField f = traj.fields[k];
    if (gauge.phase) {
      const ComplexField g = gauge_factor(*gauge.phase, k, -1);
      for (std::size_t i = 0; i < f.size(); ++i) f.values[i] *= g.values[i];
    }
    free_propagate_inplace(f, -traj.time.time(k));
    frame.push_back(std::move(f));
  }

  TemporalRegularity out;
  for (std::size_t j = 1; j < steps; ++j) {
    const std::size_t intervals = steps - j;
    double s = 0.0;
    for (std::size_t k = 0; k <= intervals; ++k) {
      const double d = field_distance(frame[k + j], frame[k]);
      s += trapezoid(k, intervals, dt) * d * d;
    }
    const double h = dt * static_cast<double>(j);
    const double value = std::sqrt(s / h);
    out.shifts.push_back(h);
    out.profile.push_back(value);
    out.sup_value = std::max(out.sup_value, value);
  }
  return out;
}

EmbeddingCheck besov_embedding_check(std::size_t nodes, double dt, const PathDistance& distance,
                                     double p) {
  EmbeddingCheck out;
  out.bound = std::pow(2.0, 1.0 + 1.0 / p);
  const double vp = vp_norm(nodes, distance, p);
  if (vp == 0.0) return out;
  const std::size_t steps = nodes - 1;
  for (std::size_t j = 1; j < steps; ++j) {
    const std::size_t intervals = steps - j;
    double s = 0.0;
    for (std::size_t k = 0; k <= intervals; ++k) {
      s += trapezoid(k, intervals, dt) * std::pow(distance(k + j, k), p);
    }
    const double h = dt * static_cast<double>(j);
    const double ratio = std::pow(s, 1.0 / p) / (std::pow(h, 1.0 / p) * vp);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  out.pass = out.max_ratio <= out.bound;
  return out;
}

EmbeddingCheck besov_embedding_check(const SampledPath<double>& path, double p) {
  const double dt = uniform_step(path);
  const auto& v = path.values;
  return besov_embedding_check(
      v.size(), dt, [&](std::size_t i, std::size_t j) { return std::abs(v[i] - v[j]); }, p);
}

EmbeddingCheck besov_embedding_check(const SampledPath<ComplexField>& path, double p) {
  const double dt = uniform_step(path);
  const auto& v = path.values;
  return besov_embedding_check(
      v.size(), dt, [&](std::size_t i, std::size_t j) { return field_distance(v[i], v[j]); }, p);
}

}  // namespace nlsctl

#pragma once

#include <functional>
#include <vector>

#include "nlsctl/grid.hpp"
#include "nlsctl/noise.hpp"
#include "nlsctl/trajectory.hpp"

namespace nlsctl {

/// Values v(t_0..t_M) of a path in a Hilbert space H on a uniform grid.
template <class T>
struct SampledPath {
  std::vector<double> times;
  std::vector<T> values;
};

/// Distance ||v_i - v_j||_H between two nodes.
using PathDistance = std::function<double(std::size_t, std::size_t)>;

/// Exact p-variation over all partitions drawn from the nodes:
///   best[0] = 0, best[i] = max_{j<i} best[j] + ||v_i - v_j||^p,
///   result = (max_i best[i])^{1/p}.
/// O(M^2) distance evaluations. Throws UndefinedPathError for M = 0.
double vp_norm(std::size_t nodes, const PathDistance& distance, double p);
double vp_norm(const SampledPath<double>& path, double p);
double vp_norm(const SampledPath<ComplexField>& path, double p);

/// Trajectory fields as an L^2-valued path.
SampledPath<ComplexField> as_sampled_path(const Trajectory& traj);

/// Which evolution operator U(0, t) the temporal-regularity transform uses.
/// Only constant noise profiles are supported, where U(0, t) = e^{it Laplacian}.
struct GaugeSpec {
  const PhaseField* phase = nullptr;  // nullptr: no noise (W = 0)
  bool constant_profiles() const noexcept;
};

struct TemporalRegularity {
  double sup_value = 0.0;
  std::vector<double> shifts;   // h = j dt, j = 1..M-1
  std::vector<double> profile;  // h^{-1/2} ||Phi(. + h) - Phi||_{L^2(0, T-h; L^2)}
};

/// Phi(t) = e^{it Laplacian} e^{-W(t)} X(t) on a dense trajectory; time
/// integrals use the trapezoid rule on [0, T - h].
/// Throws UnsupportedModeError for nonconstant noise profiles.
TemporalRegularity temporal_regularity(const Trajectory& traj, const GaugeSpec& gauge);

struct EmbeddingCheck {
  double max_ratio = 0.0;
  bool pass = true;
  double bound = 0.0;  // 2^{1 + 1/p}
};

/// max over grid shifts h of ||v(. + h) - v||_{L^p(0, T-h; H)} / (h^{1/p} ||v||_{V^p}),
/// compared to 2^{1 + 1/p}. A path without variation returns (0, true).
EmbeddingCheck besov_embedding_check(std::size_t nodes, double dt, const PathDistance& distance,
                                     double p);
EmbeddingCheck besov_embedding_check(const SampledPath<double>& path, double p);
EmbeddingCheck besov_embedding_check(const SampledPath<ComplexField>& path, double p);

}  // namespace nlsctl

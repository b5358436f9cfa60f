#pragma once

#include <span>
#include <vector>

#include "nlsctl/trajectory.hpp"

namespace nlsctl {

/// Compact convex set K in R^m: a box or a Euclidean ball.
class AdmissibleSet {
 public:
  enum class Kind { box, ball };

  static AdmissibleSet box(std::vector<double> lo, std::vector<double> hi);
  static AdmissibleSet ball(std::vector<double> center, double radius);

  Kind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept;
  const std::vector<double>& lower() const noexcept { return lo_; }
  const std::vector<double>& upper() const noexcept { return hi_; }
  const std::vector<double>& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  double diameter() const;

  /// Euclidean projection of one node value, in place. Box: clamp per
  /// channel. Ball: radial shrink; the center maps to itself.
  void project(std::span<double> value) const;
  bool contains(std::span<const double> value, double tol = 1e-12) const;

 private:
  AdmissibleSet() = default;
  Kind kind_ = Kind::box;
  std::vector<double> lo_, hi_, center_;
  double radius_ = 0.0;
};

/// m-channel control, piecewise linear between uniform time nodes.
/// `values` is row-major: values[k * m + j] = u_j(s_k).
struct ControlPath {
  TimeGrid time;
  std::size_t channels = 0;
  std::vector<double> values;

  static ControlPath constant(const TimeGrid& time, std::vector<double> value);
  static ControlPath zeros(const TimeGrid& time, std::size_t channels);

  std::size_t nodes() const noexcept { return time.nodes(); }
  double at(std::size_t k, std::size_t j) const { return values[k * channels + j]; }
  double& at(std::size_t k, std::size_t j) { return values[k * channels + j]; }
  std::span<const double> node(std::size_t k) const {
    return {values.data() + k * channels, channels};
  }
  std::span<double> node(std::size_t k) { return {values.data() + k * channels, channels}; }

  /// Linear interpolation at time t (clamped to [0, T]).
  std::vector<double> evaluate(double t) const;

  bool is_admissible(const AdmissibleSet& k_set, double tol = 1e-12) const;
};

/// Nodewise projection of a control-shaped array onto K.
ControlPath project_K(const ControlPath& g, const AdmissibleSet& k_set);

/// Discrete L^2(0, T; R^m) inner product and norm (trapezoid in time).
double control_inner(const ControlPath& a, const ControlPath& b);
double control_norm(const ControlPath& a);

/// Interpolation stencil of a time t on a control grid: value = (1-theta) u_k + theta u_{k+1}.
struct InterpolationStencil {
  std::size_t lower = 0;
  double theta = 0.0;
};
InterpolationStencil interpolation_stencil(const TimeGrid& grid, double t);

}  // namespace nlsctl

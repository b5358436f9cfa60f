#pragma once

#include <limits>
#include <variant>

#include "nlsctl/grid.hpp"
#include "nlsctl/trajectory.hpp"

namespace nlsctl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Discrete L^p norm (sum |f|^p dx^d)^{1/p}; p = kInfinity gives max |f|.
double lp_norm(const ComplexField& f, double p);

/// Discrete L^2 scalar product sum f * conj(g) dx^d.
Complex l2_inner(const ComplexField& f, const ComplexField& g);

namespace norm_kind {

struct Lp {
  double p = 2.0;
};

/// Mixed L^q_t L^p_x norm. With `strichartz` set the pair must satisfy
/// 2/q = d (1/2 - 1/p).
struct LqLp {
  double q = 2.0;
  double p = 2.0;
  bool strichartz = false;
};

/// L^2_t of the weighted Sobolev norm ||<x>^beta <grad>^alpha f||_{L^2}.
/// Only (alpha, beta) = (1/2, -1) and its dual (-1/2, +1) are supported; the
/// weight <x> is measured from the box center.
struct LocalSmoothing {
  double alpha = 0.5;
  double beta = -1.0;
};

struct TerminalL2 {};

}  // namespace norm_kind

using NormSpec = std::variant<norm_kind::Lp, norm_kind::LqLp, norm_kind::LocalSmoothing,
                              norm_kind::TerminalL2>;

/// Throws ValidationError if the norm choice is not usable on dimension d.
void validate_norm_spec(const NormSpec& spec, int dimension);

/// Space-time norm of a trajectory. Time integrals use trapezoid weights on
/// the stored nodes; Lp evaluates the spatial norm of the final node.
double trajectory_norm(const Trajectory& traj, const NormSpec& spec);

/// Single-time local smoothing integrand ||<x>^beta <grad>^alpha f||_{L^2}.
double weighted_sobolev_norm(const ComplexField& f, double alpha, double beta);

}  // namespace nlsctl

#pragma once

#include <cstddef>
#include <vector>

#include "nlsctl/grid.hpp"

namespace nlsctl {

/// Uniform time grid t_k = k * T / M, k = 0..M.
struct TimeGrid {
  double final_time = 1.0;
  std::size_t steps = 1;

  double dt() const noexcept { return final_time / static_cast<double>(steps); }
  double time(std::size_t k) const noexcept { return dt() * static_cast<double>(k); }
  std::size_t nodes() const noexcept { return steps + 1; }

  /// Trapezoid weight of node k on [0, T].
  double trapezoid_weight(std::size_t k) const noexcept;

  /// Throws InvalidDiscretizationError for T <= 0 or M == 0.
  void validate() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Time-indexed fields (forward state, tangent or adjoint).
///
/// `node_index[i]` is the index k of the underlying time grid at which
/// `fields[i]` was stored; stored nodes are every `stride` steps plus the
/// final node.
struct Trajectory {
  SpatialGrid grid;
  TimeGrid time;
  std::size_t stride = 1;
  std::vector<std::size_t> node_index;
  std::vector<ComplexField> fields;

  explicit Trajectory(const SpatialGrid& g) : grid(g) {}

  std::size_t size() const noexcept { return fields.size(); }
  double time_at(std::size_t i) const noexcept { return time.time(node_index[i]); }
  std::vector<double> times() const;
  bool dense() const noexcept { return stride == 1 && fields.size() == time.nodes(); }

  /// Stored node indices for a grid with M steps and the given stride.
  static std::vector<std::size_t> stored_nodes(std::size_t steps, std::size_t stride);
};

/// Throws ShapeError unless both trajectories sample the same nodes.
void require_same_nodes(const Trajectory& a, const Trajectory& b);

}  // namespace nlsctl

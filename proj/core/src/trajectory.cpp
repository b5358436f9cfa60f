#include "nlsctl/trajectory.hpp"

#include <cmath>
#include <string>

#include "nlsctl/errors.hpp"

namespace nlsctl {

double TimeGrid::trapezoid_weight(std::size_t k) const noexcept {
  return (k == 0 || k == steps) ? 0.5 * dt() : dt();
}

void TimeGrid::validate() const {
  if (steps == 0) throw InvalidDiscretizationError("time grid needs at least one step");
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw InvalidDiscretizationError("final time must be positive and finite");
  }
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t(node_index.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = time_at(i);
  return t;
}

std::vector<std::size_t> Trajectory::stored_nodes(std::size_t steps, std::size_t stride) {
  if (stride == 0) throw ValidationError("stride must be positive");
  std::vector<std::size_t> nodes;
  for (std::size_t k = 0; k <= steps; k += stride) nodes.push_back(k);
  if (nodes.back() != steps) nodes.push_back(steps);
  return nodes;
}

void require_same_nodes(const Trajectory& a, const Trajectory& b) {
  require_same_grid(a.grid, b.grid);
  if (!(a.time == b.time) || a.node_index != b.node_index) {
    throw ShapeError("trajectories are stored on different time nodes (" +
                     std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace nlsctl

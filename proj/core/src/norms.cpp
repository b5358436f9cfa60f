#include "nlsctl/norms.hpp"

#include <algorithm>
#include <cmath>

#include "nlsctl/errors.hpp"
#include "nlsctl/spectral.hpp"

namespace nlsctl {
namespace {

void require_finite(const ComplexField& f) {
  if (!f.all_finite()) throw InvalidFieldError("field contains non-finite values");
}

// Trapezoid weights on the stored times (the last interval may be short).
std::vector<double> stored_weights(const Trajectory& traj) {
  const auto t = traj.times();
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

double lp_norm(const ComplexField& f, double p) {
  require_finite(f);
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : f.values) m = std::max(m, std::abs(z));
    return m;
  }
  if (!(p >= 1.0)) throw ValidationError("lp_norm requires p >= 1");
  double sum = 0.0;
  if (p == 2.0) {
    for (const auto& z : f.values) sum += std::norm(z);
    return std::sqrt(sum * f.grid.cell_volume());
  }
  for (const auto& z : f.values) sum += std::pow(std::abs(z), p);
  return std::pow(sum * f.grid.cell_volume(), 1.0 / p);
}

Complex l2_inner(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid, g.grid);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f.values[i] * std::conj(g.values[i]);
  return sum * f.grid.cell_volume();
}

void validate_norm_spec(const NormSpec& spec, int dimension) {
  if (const auto* s = std::get_if<norm_kind::Lp>(&spec)) {
    if (!(s->p >= 1.0)) throw ValidationError("L^p norm requires p >= 1");
  } else if (const auto* s = std::get_if<norm_kind::LqLp>(&spec)) {
    if (!(s->p >= 1.0) || !(s->q >= 1.0)) throw ValidationError("L^q L^p requires p, q >= 1");
    if (s->strichartz) {
      const double lhs = std::isinf(s->q) ? 0.0 : 2.0 / s->q;
      const double rhs = dimension * (0.5 - (std::isinf(s->p) ? 0.0 : 1.0 / s->p));
      if (std::abs(lhs - rhs) > 1e-12) {
        throw ValidationError("(p, q) is not a Strichartz pair: 2/q != d (1/2 - 1/p)");
      }
    }
  } else if (const auto* s = std::get_if<norm_kind::LocalSmoothing>(&spec)) {
    const bool primal = s->alpha == 0.5 && s->beta == -1.0;
    const bool dual = s->alpha == -0.5 && s->beta == 1.0;
    if (!primal && !dual) {
      throw ValidationError("local smoothing supports (alpha, beta) = (1/2, -1) or (-1/2, 1)");
    }
  }
}

double weighted_sobolev_norm(const ComplexField& f, double alpha, double beta) {
  ComplexField g = f;
  apply_fourier_multiplier(
      g, [&](std::size_t i) { return Complex(std::pow(1.0 + f.grid.wavenumber_sq(i), 0.5 * alpha)); });
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.values[i] *= std::pow(1.0 + f.grid.distance_sq_to_center(i), 0.5 * beta);
  }
  return lp_norm(g, 2.0);
}

double trajectory_norm(const Trajectory& traj, const NormSpec& spec) {
  validate_norm_spec(spec, traj.grid.dimension());
  if (traj.size() < 2) throw ShapeError("trajectory norm needs at least two stored nodes");

  if (const auto* s = std::get_if<norm_kind::Lp>(&spec)) return lp_norm(traj.fields.back(), s->p);
  if (std::holds_alternative<norm_kind::TerminalL2>(spec)) return lp_norm(traj.fields.back(), 2.0);

  const auto w = stored_weights(traj);
  if (const auto* s = std::get_if<norm_kind::LqLp>(&spec)) {
    if (std::isinf(s->q)) {
      double m = 0.0;
      for (const auto& f : traj.fields) m = std::max(m, lp_norm(f, s->p));
      return m;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) sum += w[i] * std::pow(lp_norm(traj.fields[i], s->p), s->q);
    return std::pow(sum, 1.0 / s->q);
  }
  const auto& s = std::get<norm_kind::LocalSmoothing>(spec);
  double sum = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double v = weighted_sobolev_norm(traj.fields[i], s.alpha, s.beta);
    sum += w[i] * v * v;
  }
  return std::sqrt(sum);
}

}  // namespace nlsctl

#include "nlsctl/control_path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsctl/errors.hpp"

namespace nlsctl {

AdmissibleSet AdmissibleSet::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.empty()) {
    throw ValidationError("box bounds must be non-empty and of equal length");
  }
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]) || lo[j] > hi[j]) {
      throw ValidationError("box bounds must be finite with lo <= hi (channel " +
                            std::to_string(j) + ")");
    }
  }
  AdmissibleSet k;
  k.kind_ = Kind::box;
  k.lo_ = std::move(lo);
  k.hi_ = std::move(hi);
  return k;
}

AdmissibleSet AdmissibleSet::ball(std::vector<double> center, double radius) {
  if (center.empty()) throw ValidationError("ball center must be non-empty");
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw ValidationError("ball radius must be finite and non-negative");
  }
  AdmissibleSet k;
  k.kind_ = Kind::ball;
  k.center_ = std::move(center);
  k.radius_ = radius;
  return k;
}

std::size_t AdmissibleSet::dimension() const noexcept {
  return kind_ == Kind::box ? lo_.size() : center_.size();
}

double AdmissibleSet::diameter() const {
  if (kind_ == Kind::ball) return 2.0 * radius_;
  double s = 0.0;
  for (std::size_t j = 0; j < lo_.size(); ++j) s += (hi_[j] - lo_[j]) * (hi_[j] - lo_[j]);
  return std::sqrt(s);
}

void AdmissibleSet::project(std::span<double> value) const {
  if (value.size() != dimension()) throw ShapeError("control value has wrong dimension");
  if (kind_ == Kind::box) {
    for (std::size_t j = 0; j < value.size(); ++j) value[j] = std::clamp(value[j], lo_[j], hi_[j]);
    return;
  }
  double r2 = 0.0;
  for (std::size_t j = 0; j < value.size(); ++j) {
    r2 += (value[j] - center_[j]) * (value[j] - center_[j]);
  }
  const double r = std::sqrt(r2);
  if (r <= radius_) return;
  // Shrink the scale by ulps until the rounded image lies inside, so that a
  // second projection is the identity.
  const std::vector<double> offset(value.begin(), value.end());
  double scale = radius_ / r;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double s2 = 0.0;
    for (std::size_t j = 0; j < value.size(); ++j) {
      value[j] = center_[j] + scale * (offset[j] - center_[j]);
      s2 += (value[j] - center_[j]) * (value[j] - center_[j]);
    }
    if (std::sqrt(s2) <= radius_) return;
    scale = std::nextafter(scale, 0.0);
  }
}

bool AdmissibleSet::contains(std::span<const double> value, double tol) const {
  if (value.size() != dimension()) return false;
  if (kind_ == Kind::box) {
    for (std::size_t j = 0; j < value.size(); ++j) {
      if (value[j] < lo_[j] - tol || value[j] > hi_[j] + tol) return false;
    }
    return true;
  }
  double r2 = 0.0;
  for (std::size_t j = 0; j < value.size(); ++j) {
    r2 += (value[j] - center_[j]) * (value[j] - center_[j]);
  }
  return std::sqrt(r2) <= radius_ + tol;
}

ControlPath ControlPath::constant(const TimeGrid& time, std::vector<double> value) {
  ControlPath u;
  u.time = time;
  u.channels = value.size();
  u.values.reserve(time.nodes() * value.size());
  for (std::size_t k = 0; k < time.nodes(); ++k) {
    u.values.insert(u.values.end(), value.begin(), value.end());
  }
  return u;
}

ControlPath ControlPath::zeros(const TimeGrid& time, std::size_t channels) {
  return constant(time, std::vector<double>(channels, 0.0));
}

InterpolationStencil interpolation_stencil(const TimeGrid& grid, double t) {
  double s = std::clamp(t / grid.dt(), 0.0, static_cast<double>(grid.steps));
  // Snap to a node when t sits on one up to roundoff.
  if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s);
  auto lower = static_cast<std::size_t>(std::floor(s));
  if (lower >= grid.steps) lower = grid.steps - 1;
  return {lower, s - static_cast<double>(lower)};
}

std::vector<double> ControlPath::evaluate(double t) const {
  std::vector<double> out(channels, 0.0);
  if (channels == 0) return out;
  const auto st = interpolation_stencil(time, t);
  for (std::size_t j = 0; j < channels; ++j) {
    out[j] = (1.0 - st.theta) * at(st.lower, j) + st.theta * at(st.lower + 1, j);
  }
  return out;
}

bool ControlPath::is_admissible(const AdmissibleSet& k_set, double tol) const {
  for (std::size_t k = 0; k < nodes(); ++k) {
    if (!k_set.contains(node(k), tol)) return false;
  }
  return true;
}

ControlPath project_K(const ControlPath& g, const AdmissibleSet& k_set) {
  ControlPath out = g;
  for (std::size_t k = 0; k < out.nodes(); ++k) k_set.project(out.node(k));
  return out;
}

double control_inner(const ControlPath& a, const ControlPath& b) {
  if (a.values.size() != b.values.size() || !(a.time == b.time)) {
    throw ShapeError("control paths have different shapes");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < a.nodes(); ++k) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.channels; ++j) row += a.at(k, j) * b.at(k, j);
    s += a.time.trapezoid_weight(k) * row;
  }
  return s;
}

double control_norm(const ControlPath& a) { return std::sqrt(control_inner(a, a)); }

}  // namespace nlsctl

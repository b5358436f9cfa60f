#include "nlsctl/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlsctl/errors.hpp"

namespace nlsctl {

SpatialGrid::SpatialGrid(int dimension, std::size_t points_per_axis, double box_length)
    : dimension_(dimension), n_(points_per_axis), length_(box_length) {
  if (dimension != 1 && dimension != 2) {
    throw ValidationError("grid dimension must be 1 or 2, got " + std::to_string(dimension));
  }
  if (n_ < 8 || (n_ & (n_ - 1)) != 0) {
    throw ValidationError("points per axis must be a power of two >= 8, got " +
                          std::to_string(n_));
  }
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw ValidationError("box length must be positive and finite");
  }
}

double SpatialGrid::cell_volume() const noexcept {
  const double dx = spacing();
  return dimension_ == 1 ? dx : dx * dx;
}

std::size_t SpatialGrid::size() const noexcept { return dimension_ == 1 ? n_ : n_ * n_; }

double SpatialGrid::coordinate(std::size_t flat, int axis) const noexcept {
  std::size_t i = flat;
  if (dimension_ == 2) i = axis == 0 ? flat / n_ : flat % n_;
  return spacing() * static_cast<double>(i);
}

double SpatialGrid::distance_sq_to_center(std::size_t flat) const noexcept {
  double r2 = 0.0;
  for (int a = 0; a < dimension_; ++a) {
    const double dx = coordinate(flat, a) - center();
    r2 += dx * dx;
  }
  return r2;
}

double SpatialGrid::distance_sq(std::size_t flat, std::span<const double> point) const noexcept {
  double r2 = 0.0;
  for (int a = 0; a < dimension_; ++a) {
    const double c = a < static_cast<int>(point.size()) ? point[a] : center();
    const double dx = coordinate(flat, a) - c;
    r2 += dx * dx;
  }
  return r2;
}

double SpatialGrid::wavenumber(std::size_t i) const noexcept {
  const double base = 2.0 * std::numbers::pi / length_;
  const auto signed_index = i < n_ / 2 ? static_cast<double>(i)
                                       : static_cast<double>(i) - static_cast<double>(n_);
  return base * signed_index;
}

double SpatialGrid::wavenumber_sq(std::size_t flat) const noexcept {
  if (dimension_ == 1) {
    const double k = wavenumber(flat);
    return k * k;
  }
  const double kx = wavenumber(flat / n_);
  const double ky = wavenumber(flat % n_);
  return kx * kx + ky * ky;
}

ComplexField::ComplexField(const SpatialGrid& g, std::vector<Complex> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ShapeError("field has " + std::to_string(values.size()) + " values, grid needs " +
                     std::to_string(grid.size()));
  }
}

bool ComplexField::all_finite() const noexcept {
  for (const auto& z : values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(grid, other.grid);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(grid, other.grid);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= other.values[i];
  return *this;
}

ComplexField& ComplexField::operator*=(Complex scale) {
  for (auto& z : values) z *= scale;
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(Complex scale, ComplexField a) { return a *= scale; }

void require_same_grid(const SpatialGrid& a, const SpatialGrid& b) {
  if (!(a == b)) throw ShapeError("fields live on different grids");
}

}  // namespace nlsctl

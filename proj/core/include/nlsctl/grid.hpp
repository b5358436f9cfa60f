#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nlsctl {

using Complex = std::complex<double>;

/// Uniform periodic grid on the box [0, L)^d, d in {1, 2}.
///
/// The box stands in for R^d; fields are expected to decay well before the
/// boundary. Point (i, j) of a 2-D grid has flat index i * n + j.
class SpatialGrid {
 public:
  SpatialGrid(int dimension, std::size_t points_per_axis, double box_length);

  int dimension() const noexcept { return dimension_; }
  std::size_t points_per_axis() const noexcept { return n_; }
  double box_length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_); }
  /// Quadrature weight of one grid cell, dx^d.
  double cell_volume() const noexcept;
  std::size_t size() const noexcept;
  double center() const noexcept { return 0.5 * length_; }

  /// Coordinate of axis `axis` for flat index `flat`.
  double coordinate(std::size_t flat, int axis) const noexcept;
  /// Squared distance to the box center.
  double distance_sq_to_center(std::size_t flat) const noexcept;
  /// Squared distance to an arbitrary point (one coordinate per axis).
  double distance_sq(std::size_t flat, std::span<const double> point) const noexcept;

  /// Angular wavenumber for index `i` along one axis (FFT ordering).
  double wavenumber(std::size_t i) const noexcept;
  /// |k|^2 for flat index `flat`.
  double wavenumber_sq(std::size_t flat) const noexcept;

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  int dimension_;
  std::size_t n_;
  double length_;
};

/// Complex samples of a function on a SpatialGrid.
struct ComplexField {
  SpatialGrid grid;
  std::vector<Complex> values;

  explicit ComplexField(const SpatialGrid& g) : grid(g), values(g.size()) {}
  ComplexField(const SpatialGrid& g, std::vector<Complex> v);

  std::size_t size() const noexcept { return values.size(); }
  Complex& operator[](std::size_t i) { return values[i]; }
  const Complex& operator[](std::size_t i) const { return values[i]; }

  bool all_finite() const noexcept;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(Complex scale);
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(Complex scale, ComplexField a);

/// Real samples on a grid (potentials, noise profiles, weights).
using RealField = std::vector<double>;

/// Throws ShapeError unless both grids agree.
void require_same_grid(const SpatialGrid& a, const SpatialGrid& b);

}  // namespace nlsctl

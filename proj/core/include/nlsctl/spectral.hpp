#pragma once

#include <functional>

#include "nlsctl/grid.hpp"

namespace nlsctl {

// Transform convention: the forward DFT carries no scaling and the inverse
// divides by n^d, so inverse(forward(f)) == f and
//   sum_i |f_i|^2 dx^d == (dx^d / n^d) * sum_k |fhat_k|^2.

/// In-place forward DFT (no scaling).
void fft_forward(std::span<Complex> values, const SpatialGrid& grid);
/// In-place inverse DFT (scaled by 1/n^d).
void fft_inverse(std::span<Complex> values, const SpatialGrid& grid);

/// Applies a real-or-complex Fourier multiplier m(k) given as a function of
/// the flat spectral index, in place.
void apply_fourier_multiplier(ComplexField& f,
                              const std::function<Complex(std::size_t)>& multiplier);

/// Free Schrodinger flow of i dv/dt = Laplacian(v) over time t:
/// vhat_k <- exp(i |k|^2 t) vhat_k. Negative t runs the group backwards.
ComplexField free_propagate(const ComplexField& f, double t);
void free_propagate_inplace(ComplexField& f, double t);

/// Spectral partial derivative along `axis`.
ComplexField spectral_derivative(const ComplexField& f, int axis);
/// Spectral Laplacian.
ComplexField spectral_laplacian(const ComplexField& f);

}  // namespace nlsctl

#pragma once

#include <optional>

#include "nlsctl/grid.hpp"

namespace nlsctl {

/// Smooth radial cut-off g with g = 1 on [0, 1] and g = 0 on [2, inf).
struct TruncationLevel {
  double level = 1.0;

  /// g(|z| / level).
  double factor(double modulus) const;
};

/// Standard C^infinity step between 1 and 2.
double smooth_cutoff(double r);

/// Wirtinger derivatives of z -> |z|^{alpha-1} z evaluated on a field:
///   h1 = (alpha+1)/2 |X|^{alpha-1},  h2 = (alpha-1)/2 |X|^{alpha-3} X^2,
/// with h2 := 0 where X = 0.
struct Linearization {
  RealField h1;
  std::vector<Complex> h2;
};

Linearization linearize(const ComplexField& x, double alpha,
                        std::optional<TruncationLevel> trunc = std::nullopt);

/// Pointwise h1(z), h2(z) for a scalar.
void wirtinger_coefficients(Complex z, double alpha, double& h1, Complex& h2);

}  // namespace nlsctl

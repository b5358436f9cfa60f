#include "nlsctl/linearization.hpp"

#include <cmath>

#include "nlsctl/errors.hpp"

namespace nlsctl {
namespace {

double bump_kernel(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = bump_kernel(2.0 - r);
  const double b = bump_kernel(r - 1.0);
  return a / (a + b);
}

double TruncationLevel::factor(double modulus) const { return smooth_cutoff(modulus / level); }

void wirtinger_coefficients(Complex z, double alpha, double& h1, Complex& h2) {
  const double r = std::abs(z);
  if (r == 0.0) {
    h1 = 0.0;
    h2 = 0.0;
    return;
  }
  const double r_pow = std::pow(r, alpha - 1.0);
  h1 = 0.5 * (alpha + 1.0) * r_pow;
  // |X|^{alpha-3} X^2 = |X|^{alpha-1} (X / |X|)^2
  const Complex unit = z / r;
  h2 = 0.5 * (alpha - 1.0) * r_pow * unit * unit;
}

Linearization linearize(const ComplexField& x, double alpha, std::optional<TruncationLevel> trunc) {
  if (!(alpha > 1.0)) throw ValidationError("linearize requires alpha > 1");
  if (trunc && !(trunc->level > 0.0)) throw ValidationError("truncation level must be positive");
  Linearization lin{RealField(x.size()), std::vector<Complex>(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    wirtinger_coefficients(x.values[i], alpha, lin.h1[i], lin.h2[i]);
    if (trunc) {
      const double g = trunc->factor(std::abs(x.values[i]));
      lin.h1[i] *= g;
      lin.h2[i] *= g;
    }
  }
  return lin;
}

}  // namespace nlsctl

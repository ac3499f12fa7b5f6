#pragma once

#include <cmath>

namespace trimode::num {

// Scalar kernels shared by the mode-coefficient formulas and the classical
// pump-depletion model. All three are entire functions of the signed square
// x = w * t^2 (w = |gamma2|^2 - |gamma1|^2): trigonometric for x > 0,
// hyperbolic for x < 0. The half-angle identities keep 1 - cos(u) free of
// cancellation; a short Taylor branch covers the removable singularity at
// x = 0 (reached when |Omega| t < 1e-6).

// cos(sqrt(x)), continued as cosh(sqrt(-x)) for x < 0.
inline double phase_cos(double x) {
  if (std::abs(x) < 1e-12) return 1.0 - 0.5 * x + x * x / 24.0;
  if (x > 0.0) return std::cos(std::sqrt(x));
  return std::cosh(std::sqrt(-x));
}

// sin(sqrt(x))/sqrt(x), continued as sinh(sqrt(-x))/sqrt(-x); 1 at x = 0.
inline double phase_sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0 - x / 6.0 + x * x / 120.0;
  if (x > 0.0) {
    const double u = std::sqrt(x);
    return std::sin(u) / u;
  }
  const double u = std::sqrt(-x);
  return std::sinh(u) / u;
}

// (1 - cos(sqrt(x)))/x, continued as (cosh(sqrt(-x)) - 1)/(-x); 1/2 at x = 0.
inline double phase_versine(double x) {
  if (std::abs(x) < 1e-12) return 0.5 - x / 24.0 + x * x / 720.0;
  if (x > 0.0) {
    const double v = 0.5 * std::sqrt(x);
    const double s = std::sin(v) / v;  // 2 sin^2(u/2) = 1 - cos(u)
    return 0.5 * s * s;
  }
  const double v = 0.5 * std::sqrt(-x);
  const double s = std::sinh(v) / v;  // 2 sinh^2(u/2) = cosh(u) - 1
  return 0.5 * s * s;
}

}  // namespace trimode::num

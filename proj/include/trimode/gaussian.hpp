#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "trimode/dynamics.hpp"

namespace trimode::gaussian {

using Complex = std::complex<double>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Matrix6c = Eigen::Matrix<Complex, 6, 6>;

// Covariance matrix of the quadratures (x1, x2, x3, p1, p2, p3) in the
// convention chi(lambda) = exp(-x^T C x / 4) with lambda_j =
// (p_j - i x_j)/sqrt(2). The vacuum is the identity; a thermal mode with mean
// n contributes 1 + 2n on its diagonal.
struct Covariance6 {
  Matrix6 m = Matrix6::Identity();
};

// Covariance of the evolved three-mode vacuum.
Covariance6 covariance_from_couplings(const dynamics::CouplingConfig& cfg);
Covariance6 covariance_from_coefficients(const dynamics::ModeCoefficients& mc);

// chi(lambda) through the covariance quadratic form.
double characteristic_function(const Covariance6& cov,
                               const std::array<Complex, 3>& lambdas);

// chi(lambda) through the Heisenberg route exp(-sum |lambda'_j|^2 / 2), where
// lambda' is the coefficient-transformed argument. Agrees with the covariance
// route to machine precision; kept separate as an independent evaluation path.
double characteristic_function(const dynamics::CouplingConfig& cfg,
                               const std::array<Complex, 3>& lambdas);

// Partial-transposition test on all three 1-vs-2 mode bipartitions. Gamma_j =
// Lambda_j C Lambda_j - i J must be positive semidefinite for a physical
// partial transpose; a negative minimum eigenvalue on every j certifies full
// inseparability.
struct PptReport {
  std::array<double, 3> min_eig{};
  bool fully_inseparable = false;
  double tolerance = 0.0;
};

// tol_scale is multiplied by the covariance max-abs entry to form the
// decision tolerance.
PptReport ppt_test(const Covariance6& cov, double tol_scale = 1e-9);

// Heisenberg physicality: min eigenvalue of C + iJ >= -tol.
bool is_physical(const Covariance6& cov, double tol = 1e-9);

// The symplectic form J = [[0, -I], [I, 0]] in the (x, p) block ordering.
Matrix6 symplectic_form();

}  // namespace trimode::gaussian

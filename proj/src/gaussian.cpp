#include "trimode/gaussian.hpp"

#include <cmath>

namespace trimode::gaussian {

namespace {

constexpr Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// The transformed argument of the characteristic function:
//   lambda'_1 = f1 l1 - g1 conj(l2) - h1 conj(l3)
//   lambda'_2 = -conj(f2) conj(l1) + g2 l2 + conj(h2) l3
//   lambda'_3 = -conj(f3) conj(l1) + conj(g3) l2 + h3 l3
std::array<Complex, 3> transformed_lambdas(const dynamics::ModeCoefficients& mc,
                                           const std::array<Complex, 3>& l) {
  const auto& f = mc.f;
  const auto& g = mc.g;
  const auto& h = mc.h;
  return {
      f[0] * l[0] - g[0] * std::conj(l[1]) - h[0] * std::conj(l[2]),
      -std::conj(f[1]) * std::conj(l[0]) + g[1] * l[1] + std::conj(h[1]) * l[2],
      -std::conj(f[2]) * std::conj(l[0]) + std::conj(g[2]) * l[1] + h[2] * l[2],
  };
}

// Complex 3x6 matrix T with lambda' = T (x1,x2,x3,p1,p2,p3)^T, built from the
// per-mode (coefficient of lambda_j, coefficient of conj(lambda_j)) pairs via
// lambda_j = (p_j - i x_j)/sqrt(2).
Eigen::Matrix<Complex, 3, 6> lambda_map(const dynamics::ModeCoefficients& mc) {
  const std::array<std::array<std::array<Complex, 2>, 3>, 3> rows = {{
      {{{mc.f[0], 0.0}, {0.0, -mc.g[0]}, {0.0, -mc.h[0]}}},
      {{{0.0, -std::conj(mc.f[1])}, {mc.g[1], 0.0}, {std::conj(mc.h[1]), 0.0}}},
      {{{0.0, -std::conj(mc.f[2])}, {std::conj(mc.g[2]), 0.0}, {mc.h[2], 0.0}}},
  }};
  Eigen::Matrix<Complex, 3, 6> t;
  for (int r = 0; r < 3; ++r) {
    for (int j = 0; j < 3; ++j) {
      const Complex a = rows[r][j][0];  // multiplies lambda_j
      const Complex b = rows[r][j][1];  // multiplies conj(lambda_j)
      t(r, j) = kI * (b - a) * kInvSqrt2;
      t(r, 3 + j) = (a + b) * kInvSqrt2;
    }
  }
  return t;
}

Eigen::Matrix<double, 6, 1> quadrature_vector(
    const std::array<Complex, 3>& lambdas) {
  Eigen::Matrix<double, 6, 1> x;
  const double sqrt2 = std::sqrt(2.0);
  for (int j = 0; j < 3; ++j) {
    x(j) = -sqrt2 * lambdas[j].imag();
    x(3 + j) = sqrt2 * lambdas[j].real();
  }
  return x;
}

}  // namespace

Matrix6 symplectic_form() {
  Matrix6 j = Matrix6::Zero();
  j.block<3, 3>(0, 3) = -Eigen::Matrix3d::Identity();
  j.block<3, 3>(3, 0) = Eigen::Matrix3d::Identity();
  return j;
}

Covariance6 covariance_from_coefficients(const dynamics::ModeCoefficients& mc) {
  const auto t = lambda_map(mc);
  Covariance6 cov;
  cov.m = 2.0 * (t.adjoint() * t).real();
  return cov;
}

Covariance6 covariance_from_couplings(const dynamics::CouplingConfig& cfg) {
  return covariance_from_coefficients(dynamics::heisenberg_coefficients(cfg));
}

double characteristic_function(const Covariance6& cov,
                               const std::array<Complex, 3>& lambdas) {
  const auto x = quadrature_vector(lambdas);
  return std::exp(-0.25 * x.dot(cov.m * x));
}

double characteristic_function(const dynamics::CouplingConfig& cfg,
                               const std::array<Complex, 3>& lambdas) {
  const auto lp =
      transformed_lambdas(dynamics::heisenberg_coefficients(cfg), lambdas);
  return std::exp(
      -0.5 * (std::norm(lp[0]) + std::norm(lp[1]) + std::norm(lp[2])));
}

PptReport ppt_test(const Covariance6& cov, double tol_scale) {
  const Matrix6 j = symplectic_form();
  PptReport report;
  report.tolerance = tol_scale * cov.m.cwiseAbs().maxCoeff();
  bool all_negative = true;
  for (int mode = 0; mode < 3; ++mode) {
    Matrix6 lambda = Matrix6::Identity();
    lambda(3 + mode, 3 + mode) = -1.0;  // time reversal flips p_mode
    const Matrix6 flipped = lambda * cov.m * lambda;
    const Matrix6c gamma =
        flipped.cast<Complex>() - kI * j.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Matrix6c> solver(gamma);
    report.min_eig[mode] = solver.eigenvalues().minCoeff();
    all_negative = all_negative && report.min_eig[mode] < -report.tolerance;
  }
  report.fully_inseparable = all_negative;
  return report;
}

bool is_physical(const Covariance6& cov, double tol) {
  const Matrix6c u =
      cov.m.cast<Complex>() + kI * symplectic_form().cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Matrix6c> solver(u);
  return solver.eigenvalues().minCoeff() >= -tol;
}

}  // namespace trimode::gaussian

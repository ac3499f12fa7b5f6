#include "trimode/gaussian.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "trimode/dynamics.hpp"
#include "trimode/fock.hpp"

using namespace trimode;
using dynamics::CouplingConfig;
using Complex = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

// gamma = (1, 2) driven to Omega t = pi/2.
CouplingConfig quarter_period() {
  return {{1.0, 0.0}, {2.0, 0.0}, kPi / (2.0 * std::sqrt(3.0))};
}

// Smallest eigenvalue of a Hermitian matrix by power iteration on the
// shifted matrix sigma*I - G, converged to 1e-8 on the Rayleigh quotient.
double min_eig_power_iteration(const Eigen::Matrix<Complex, 6, 6>& g) {
  const double sigma = 1.0 + g.cwiseAbs().sum();
  const Eigen::Matrix<Complex, 6, 6> shifted =
      sigma * Eigen::Matrix<Complex, 6, 6>::Identity() - g;
  Eigen::Matrix<Complex, 6, 1> v;
  v.setOnes();
  v(1) = Complex{0.3, 0.7};  // break symmetry
  v.normalize();
  double rayleigh = 0.0;
  for (int it = 0; it < 300000; ++it) {
    Eigen::Matrix<Complex, 6, 1> w = shifted * v;
    const double next = v.dot(w).real();
    w.normalize();
    v = w;
    // The Rayleigh quotient converges quadratically in the iterate error;
    // the tight threshold guards against stalling on small eigengaps.
    if (it > 3 && std::abs(next - rayleigh) < 1e-12 * sigma) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  return sigma - rayleigh;
}

}  // namespace

TEST_CASE("vacuum covariance is the identity") {
  const auto cov =
      gaussian::covariance_from_couplings({{1.0, 0.0}, {2.0, 0.0}, 0.0});
  CHECK((cov.m - gaussian::Matrix6::Identity()).cwiseAbs().maxCoeff() <
        1e-14);
  const auto report = gaussian::ppt_test(cov);
  for (double eig : report.min_eig) CHECK(std::abs(eig) < 1e-10);
  CHECK_FALSE(report.fully_inseparable);
}

TEST_CASE("pinned diagonal second moments at the quarter period") {
  const auto cov = gaussian::covariance_from_couplings(quarter_period());
  const auto pops = dynamics::mode_populations(quarter_period());
  const double expected[3] = {1.0 + 2.0 * pops.n1, 1.0 + 2.0 * pops.n2,
                              1.0 + 2.0 * pops.n3};
  CHECK(std::abs(expected[0] - 23.0 / 9.0) < 1e-12);
  for (int mode = 0; mode < 3; ++mode) {
    CHECK(std::abs(cov.m(mode, mode) - expected[mode]) < 1e-12);
    CHECK(std::abs(cov.m(3 + mode, 3 + mode) - expected[mode]) < 1e-12);
  }
}

TEST_CASE("covariance is symmetric and physical") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const auto cov =
        gaussian::covariance_from_couplings(oracles::random_config(rng));
    CHECK((cov.m - cov.m.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(gaussian::is_physical(cov));
  }
}

TEST_CASE("covariance built from oracle coefficients matches closed form") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 30; ++i) {
    const auto cfg = oracles::random_config(rng);
    const auto direct = gaussian::covariance_from_couplings(cfg);
    const auto via_oracle = gaussian::covariance_from_coefficients(
        oracles::coefficients_oracle(cfg));
    CHECK((direct.m - via_oracle.m).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("characteristic function basics") {
  const auto vacuum =
      gaussian::covariance_from_couplings({{1.0, 0.0}, {2.0, 0.0}, 0.0});
  CHECK(gaussian::characteristic_function(vacuum, {Complex{}, Complex{},
                                                   Complex{}}) == 1.0);
  CHECK(std::abs(gaussian::characteristic_function(
                     vacuum, {Complex{1.0, 0.0}, Complex{}, Complex{}}) -
                 std::exp(-0.5)) < 1e-14);
}

TEST_CASE("both characteristic-function routes agree") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (int i = 0; i < 40; ++i) {
    const auto cfg = oracles::random_config(rng);
    const auto cov = gaussian::covariance_from_couplings(cfg);
    const std::array<Complex, 3> lambdas = {Complex{coord(rng), coord(rng)},
                                            Complex{coord(rng), coord(rng)},
                                            Complex{coord(rng), coord(rng)}};
    const double via_cov = gaussian::characteristic_function(cov, lambdas);
    const double via_heisenberg =
        gaussian::characteristic_function(cfg, lambdas);
    CHECK(std::abs(via_cov - via_heisenberg) < 1e-12);
    CHECK(via_cov <= 1.0 + 1e-15);
  }
}

TEST_CASE("characteristic function matches displacement expectation") {
  const auto cfg = quarter_period();
  const auto state = fock::build_vacuum_state(cfg, 34);
  const std::array<Complex, 3> lambdas = {Complex{1.0, 0.0}, Complex{},
                                          Complex{}};
  const auto shifted = fock::displaced(state, lambdas);
  const auto a = state.dense();
  const auto b = shifted.dense();
  Complex overlap{};
  for (std::size_t i = 0; i < a.size(); ++i)
    overlap += std::conj(a[i]) * b[i];
  const double analytic = gaussian::characteristic_function(
      gaussian::covariance_from_couplings(cfg), lambdas);
  CHECK(std::abs(overlap.imag()) < 1e-6);
  CHECK(std::abs(overlap.real() - analytic) < 1e-6);
}

TEST_CASE("partial transpose test flags full inseparability") {
  SUBCASE("pinned config has three negative eigenvalues") {
    const auto report = gaussian::ppt_test(
        gaussian::covariance_from_couplings(quarter_period()));
    for (double eig : report.min_eig) CHECK(eig < -report.tolerance);
    CHECK(report.fully_inseparable);
  }
  SUBCASE("random grid is fully inseparable throughout") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 50; ++i) {
      const auto cov =
          gaussian::covariance_from_couplings(oracles::random_config(rng));
      CHECK(gaussian::ppt_test(cov).fully_inseparable);
    }
  }
}

TEST_CASE("dense eigenvalue solver agrees with power iteration") {
  std::mt19937_64 rng(15);
  const gaussian::Matrix6 j = gaussian::symplectic_form();
  for (int i = 0; i < 10; ++i) {
    const auto cov =
        gaussian::covariance_from_couplings(oracles::random_config(rng));
    const auto report = gaussian::ppt_test(cov);
    for (int mode = 0; mode < 3; ++mode) {
      gaussian::Matrix6 lambda = gaussian::Matrix6::Identity();
      lambda(3 + mode, 3 + mode) = -1.0;
      const Eigen::Matrix<Complex, 6, 6> gamma =
          (lambda * cov.m * lambda).cast<Complex>() -
          Complex{0.0, 1.0} * j.cast<Complex>();
      CHECK(std::abs(min_eig_power_iteration(gamma) -
                     report.min_eig[mode]) < 1e-6);
    }
  }
}

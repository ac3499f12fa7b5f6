#include "trimode/conditional.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace trimode::conditional {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("eta must lie in [0, 1]");
}

}  // namespace

double no_click_probability(double n3, double eta) {
  check_eta(eta);
  if (n3 < 0.0) throw std::invalid_argument("population must be non-negative");
  return 1.0 / (1.0 + eta * n3);
}

fock::DensityMatrix conditional_density(const fock::TriFockState& state,
                                        double eta, int conditioned_mode) {
  check_eta(eta);
  if (conditioned_mode < 1 || conditioned_mode > 3)
    throw std::invalid_argument("mode labels are 1, 2, 3");
  const int d = state.cutoff() + 1;
  const int traced = conditioned_mode - 1;
  std::vector<int> kept;
  for (int m = 1; m <= 3; ++m)
    if (m != conditioned_mode) kept.push_back(m);

  std::vector<double> weight(d);
  for (int m = 0; m < d; ++m) weight[m] = std::pow(1.0 - eta, m);
  if (eta == 1.0) weight[0] = 1.0;  // 0^0

  fock::DensityMatrix out;
  out.modes = kept;
  out.dim = d;
  out.rho = Eigen::MatrixXcd::Zero(d * d, d * d);

  if (state.layout() == fock::TriFockState::Layout::kPairSheet &&
      conditioned_mode == 3) {
    // On the n1 = n2 + n3 support only (n2 + m, n2) rows appear.
    const auto& sheet = state.raw();
    for (int m = 0; m < d; ++m)
      for (int a2 = 0; a2 + m < d; ++a2)
        for (int b2 = 0; b2 + m < d; ++b2)
          out.rho((a2 + m) * d + a2, (b2 + m) * d + b2) +=
              weight[m] * sheet[static_cast<std::size_t>(a2) * d + m] *
              std::conj(sheet[static_cast<std::size_t>(b2) * d + m]);
  } else {
    const auto psi = state.dense();
    const auto at = [&](int i, int j, int m) {
      std::array<int, 3> n{};
      int k = 0;
      for (int pos = 0; pos < 3; ++pos)
        n[pos] = pos == traced ? m : (k++ == 0 ? i : j);
      return psi[(static_cast<std::size_t>(n[0]) * d + n[1]) * d + n[2]];
    };
    for (int m = 0; m < d; ++m)
      for (int a1 = 0; a1 < d; ++a1)
        for (int a2 = 0; a2 < d; ++a2) {
          const fock::Complex left = at(a1, a2, m);
          if (left == fock::Complex{}) continue;
          for (int b1 = 0; b1 < d; ++b1)
            for (int b2 = 0; b2 < d; ++b2)
              out.rho(a1 * d + a2, b1 * d + b2) +=
                  weight[m] * left * std::conj(at(b1, b2, m));
        }
  }

  const double trace = out.rho.trace().real();
  if (trace <= 0.0)
    throw std::invalid_argument("conditional state has no support");
  out.rho /= trace;
  return out;
}

double photon_correlation(double n2, double n3, double eta) {
  check_eta(eta);
  if (n2 < 0.0 || n3 < 0.0)
    throw std::invalid_argument("populations must be non-negative");
  const double denom = (1.0 + eta * n3) * (2.0 * n2 + n3 * (1.0 - eta));
  if (denom == 0.0)
    throw std::domain_error("photon correlation undefined: zero denominator");
  return n3 * (1.0 - eta) * (1.0 + n3) / denom;
}

TwbFidelity twb_fidelity(double n2, double n3, double eta,
                         std::optional<double> xi) {
  check_eta(eta);
  if (n2 < 0.0 || n3 < 0.0)
    throw std::invalid_argument("populations must be non-negative");
  const double n1 = n2 + n3;
  TwbFidelity result;
  result.xi_star = std::sqrt(n2 / (1.0 + n1));
  if (xi) {
    if (!(std::abs(*xi) < 1.0))
      throw std::invalid_argument("twin-beam parameter must satisfy |xi| < 1");
    const double num = (1.0 + eta * n3) * (1.0 - *xi * *xi);
    const double den = (1.0 + n1) * std::pow(1.0 - *xi * result.xi_star, 2);
    result.fid = num / den;
  } else {
    result.fid = (1.0 + eta * n3) / (1.0 + n3);
  }
  return result;
}

TwbReport twb_report(double n2, double n3, double eta,
                     std::optional<double> xi) {
  TwbReport report;
  report.eta = eta;
  report.p0 = no_click_probability(n3, eta);
  report.zeta12 = photon_correlation(n2, n3, eta);
  const TwbFidelity fid = twb_fidelity(n2, n3, eta, xi);
  report.fid = fid.fid;
  report.xi_star = fid.xi_star;
  return report;
}

}  // namespace trimode::conditional

#include "trimode/telecloning.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trimode::telecloning {

namespace {

double gain(double nj, double n1) { return std::sqrt(nj / (1.0 + n1)); }

}  // namespace

bool TeleclonePlan::seeded() const {
  return seed_alpha.has_value() && *seed_alpha != Complex{};
}

std::array<Complex, 3> TeleclonePlan::displacements() const {
  if (!seeded()) return {Complex{}, Complex{}, Complex{}};
  if (!f_coeffs)
    throw std::invalid_argument(
        "seeded plan needs the Heisenberg coefficients");
  const Complex a = *seed_alpha;
  // Matches the first moments of the seeded state: <a_1> = alpha f1,
  // <a_2> = conj(alpha) g1, <a_3> = conj(alpha) h1.
  return {a * f_coeffs->f[0], std::conj(a) * f_coeffs->g[0],
          std::conj(a) * f_coeffs->h[0]};
}

void TeleclonePlan::validate() const {
  if (!(n1 >= 0.0 && n2 >= 0.0 && n3 >= 0.0))
    throw std::invalid_argument("plan populations must be non-negative");
  if (std::abs(n1 - n2 - n3) > 1e-9 * (1.0 + n1))
    throw std::invalid_argument("plan requires n1 = n2 + n3");
  if (std::abs(kappa2 - gain(n2, n1)) > 1e-9 ||
      std::abs(kappa3 - gain(n3, n1)) > 1e-9)
    throw std::invalid_argument("plan gains do not match its populations");
  if (seeded() && !f_coeffs)
    throw std::invalid_argument(
        "seeded plan needs the Heisenberg coefficients");
}

TeleclonePlan TeleclonePlan::from_populations(double n2, double n3) {
  if (n2 < 0.0 || n3 < 0.0)
    throw std::invalid_argument("populations must be non-negative");
  TeleclonePlan plan;
  plan.n1 = n2 + n3;
  plan.n2 = n2;
  plan.n3 = n3;
  plan.kappa2 = gain(n2, plan.n1);
  plan.kappa3 = gain(n3, plan.n1);
  return plan;
}

TeleclonePlan TeleclonePlan::from_config(const dynamics::CouplingConfig& cfg) {
  const auto pops = dynamics::mode_populations(cfg);
  return from_populations(pops.n2, pops.n3);
}

TeleclonePlan TeleclonePlan::from_config(const dynamics::CouplingConfig& cfg,
                                         Complex alpha) {
  TeleclonePlan plan = from_config(cfg);
  plan.seed_alpha = alpha;
  plan.f_coeffs = dynamics::heisenberg_coefficients(cfg);
  return plan;
}

OutcomeSampler::OutcomeSampler(Complex z, double n1, std::uint64_t seed)
    : rng_(seed), center_(-std::conj(z)), axis_sigma_(std::sqrt(0.5 * (1.0 + n1))) {
  if (n1 < 0.0) throw std::invalid_argument("n1 must be non-negative");
}

double OutcomeSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on fixed 53-bit uniforms keeps the stream platform-stable,
  // unlike std::normal_distribution.
  const double u1 = (rng_() >> 11) * 0x1.0p-53;  // [0, 1)
  const double u2 = (rng_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

Complex OutcomeSampler::next() {
  const double g1 = normal();
  const double g2 = normal();
  return center_ + axis_sigma_ * Complex{g1, g2};
}

std::array<Complex, 2> conditional_amplitudes(Complex z, Complex beta,
                                              const TeleclonePlan& plan) {
  const auto d = plan.displacements();
  const Complex shifted = z + std::conj(beta - d[0]);
  return {shifted * plan.kappa2 + d[1], shifted * plan.kappa3 + d[2]};
}

std::array<Complex, 2> correction_displacements(Complex beta,
                                                const TeleclonePlan& plan) {
  const auto d = plan.displacements();
  const Complex centered = std::conj(beta - d[0]);
  return {centered + d[1], centered + d[2]};
}

std::array<Complex, 2> corrected_clone_amplitudes(Complex z, Complex beta,
                                                  const TeleclonePlan& plan) {
  const auto cond = conditional_amplitudes(z, beta, plan);
  const auto corr = correction_displacements(beta, plan);
  return {cond[0] - corr[0], cond[1] - corr[1]};
}

std::array<double, 2> clone_fidelities(double n2, double n3) {
  if (n2 < 0.0 || n3 < 0.0)
    throw std::invalid_argument("populations must be non-negative");
  const auto fidelity = [](double own, double other) {
    return 1.0 /
           (2.0 + other + 2.0 * own - 2.0 * std::sqrt(own * (own + other + 1.0)));
  };
  return {fidelity(n2, n3), fidelity(n3, n2)};
}

double symmetric_fidelity(double n) { return clone_fidelities(n, n)[0]; }

FrontierPoint asymmetric_frontier(double f3_target) {
  constexpr double kLow = 0.5;
  const double high = 2.0 / 3.0;
  if (!(f3_target >= kLow && f3_target <= high + 1e-15))
    throw std::domain_error("frontier target must lie in [1/2, 2/3]");
  FrontierPoint point;
  point.n2 = 1.0 / f3_target - 1.0;
  point.n3 = 0.25 / point.n2;
  point.f2 = 4.0 * (1.0 - f3_target) / (4.0 - 3.0 * f3_target);
  return point;
}

CloneReport mc_teleclone(Complex z, const dynamics::CouplingConfig& cfg,
                         std::optional<Complex> alpha, std::size_t samples,
                         std::uint64_t rng_seed) {
  if (samples < 1000)
    throw std::invalid_argument("mc_teleclone needs at least 1000 samples");
  const TeleclonePlan plan = alpha ? TeleclonePlan::from_config(cfg, *alpha)
                                   : TeleclonePlan::from_config(cfg);
  const Complex d1 = plan.displacements()[0];

  OutcomeSampler sampler(z, plan.n1, rng_seed);
  double sum2 = 0.0, sum3 = 0.0, sq2 = 0.0, sq3 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    // The lab-frame outcome density of a seeded resource is the unseeded one
    // shifted by d1.
    const Complex beta = sampler.next() + d1;
    const auto c = corrected_clone_amplitudes(z, beta, plan);
    const double f2 = std::exp(-std::norm(c[0] - z));
    const double f3 = std::exp(-std::norm(c[1] - z));
    sum2 += f2;
    sum3 += f3;
    sq2 += f2 * f2;
    sq3 += f3 * f3;
  }
  const double n = static_cast<double>(samples);
  const auto stderr_of = [n](double sum, double sq) {
    const double mean = sum / n;
    const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1.0));
    return std::sqrt(var / n);
  };

  CloneReport report;
  report.f2 = sum2 / n;
  report.f3 = sum3 / n;
  report.stderr2 = stderr_of(sum2, sq2);
  report.stderr3 = stderr_of(sum3, sq3);
  report.samples = samples;
  report.seed = rng_seed;
  report.input_z = z;
  return report;
}

}  // namespace trimode::telecloning

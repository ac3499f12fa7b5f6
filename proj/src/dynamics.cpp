#include "trimode/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "trimode/numeric.hpp"

namespace trimode::dynamics {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Kernels {
  double c;  // cos(Omega t)
  double s;  // sin(Omega t)/Omega
  double v;  // (1 - cos(Omega t))/Omega^2
};

Kernels kernels(double omega_sq, double t) {
  const double x = omega_sq * t * t;
  return {num::phase_cos(x), t * num::phase_sinc(x),
          t * t * num::phase_versine(x)};
}

}  // namespace

double CouplingConfig::omega_sq() const {
  return std::norm(gamma2) - std::norm(gamma1);
}

double CouplingConfig::ratio() const {
  return std::abs(gamma1) / std::abs(gamma2);
}

void CouplingConfig::validate() const {
  if (!(time >= 0.0))
    throw std::invalid_argument("coupling config: time must be >= 0");
  if (gamma1 == Complex{} && gamma2 == Complex{})
    throw std::invalid_argument(
        "coupling config: gamma1 and gamma2 cannot both vanish");
}

CouplingConfig CouplingConfig::from_reduced(double ratio, double omega_t,
                                            double phase1, double phase2) {
  if (!(ratio > 0.0))
    throw std::invalid_argument("from_reduced: ratio must be > 0");
  if (!(omega_t >= 0.0))
    throw std::invalid_argument("from_reduced: omega_t must be >= 0");
  const double w = std::abs(1.0 - ratio * ratio);
  if (w < 1e-14)
    throw std::invalid_argument(
        "from_reduced: ratio == 1 is degenerate (Omega = 0); pass explicit "
        "couplings and time instead");
  CouplingConfig cfg;
  cfg.gamma1 = std::polar(ratio, phase1);
  cfg.gamma2 = std::polar(1.0, phase2);
  cfg.time = omega_t / std::sqrt(w);
  return cfg;
}

ModeCoefficients heisenberg_coefficients_at(const CouplingConfig& cfg,
                                            double signed_time) {
  const double w = cfg.omega_sq();
  const auto [c, s, v] = kernels(w, signed_time);
  const Complex g1 = cfg.gamma1;
  const Complex g2 = cfg.gamma2;
  ModeCoefficients mc;
  mc.omega_sq = w;
  mc.f = {1.0 + std::norm(g1) * v, std::conj(g1) * std::conj(g2) * v,
          kI * std::conj(g1) * s};
  mc.g = {-g1 * g2 * v, 1.0 - std::norm(g2) * v, -kI * g2 * s};
  mc.h = {-kI * g1 * s, -kI * std::conj(g2) * s, Complex{c, 0.0}};
  return mc;
}

ModeCoefficients heisenberg_coefficients(const CouplingConfig& cfg) {
  cfg.validate();
  return heisenberg_coefficients_at(cfg, cfg.time);
}

Populations mode_populations(const CouplingConfig& cfg) {
  cfg.validate();
  const auto [c, s, v] = kernels(cfg.omega_sq(), cfg.time);
  Populations p;
  p.n3 = std::norm(cfg.gamma1) * s * s;
  p.n2 = std::norm(cfg.gamma1) * std::norm(cfg.gamma2) * v * v;
  p.n1 = p.n2 + p.n3;
  return p;
}

Populations seeded_populations(const CouplingConfig& cfg, Complex alpha) {
  const Populations p = mode_populations(cfg);
  const double gain = 1.0 + std::norm(alpha);
  return {p.n1 * gain + std::norm(alpha), p.n2 * gain, p.n3 * gain};
}

std::optional<SymmetricPoint> symmetric_point(double ratio) {
  if (!(ratio > 0.0))
    throw std::invalid_argument("symmetric_point: ratio must be > 0");
  if (ratio > 1.0) return std::nullopt;
  const double r2 = ratio * ratio;
  const double c = r2 / (2.0 - r2);
  return SymmetricPoint{std::acos(c), 4.0 * r2 / ((2.0 - r2) * (2.0 - r2))};
}

double optimal_symmetric_ratio() { return 2.0 - std::sqrt(2.0); }

CouplingConfig config_for_populations(double n2, double n3) {
  if (!(n2 > 0.0) || !(n3 > 0.0))
    throw std::invalid_argument(
        "config_for_populations: requires n2 > 0 and n3 > 0");
  // With |gamma2| = 1, r = |gamma1|: n3 = r^2 (1 - c^2)/(1 - r^2) and
  // n2 = r^2 (1 - c)^2/(1 - r^2)^2 solve to u = 1 + c with
  // u^2 (n2 + n3) - 2 u n3 - n3^2 = 0.
  const double u = n3 * (1.0 + std::sqrt(1.0 + n2 + n3)) / (n2 + n3);
  const double c = u - 1.0;
  const double r2 = n3 * n3 / (u * u * n2);
  const double r = std::sqrt(r2);
  double t;
  if (std::abs(1.0 - r2) < 1e-12) {
    t = std::sqrt(n3) / r;  // degenerate crossing: n3 = r^2 t^2
  } else if (r2 < 1.0) {
    t = std::acos(c) / std::sqrt(1.0 - r2);
  } else {
    t = std::acosh(c) / std::sqrt(r2 - 1.0);
  }
  CouplingConfig cfg;
  cfg.gamma1 = Complex{0.0, r};
  cfg.gamma2 = Complex{0.0, 1.0};
  cfg.time = t;
  return cfg;
}

}  // namespace trimode::dynamics

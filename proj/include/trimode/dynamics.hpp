#pragma once

#include <array>
#include <complex>
#include <optional>

namespace trimode::dynamics {

using Complex = std::complex<double>;

// Interaction strengths of the two interlinked bilinear processes and the
// evolution time. gamma1 drives the a1^dag a3^dag downconversion link,
// gamma2 the a2^dag a3 exchange link.
struct CouplingConfig {
  Complex gamma1{0.0, 0.0};
  Complex gamma2{0.0, 0.0};
  double time = 0.0;

  // Signed frequency square w = |gamma2|^2 - |gamma1|^2. The evolution is
  // oscillatory for w > 0, hyperbolic for w < 0, polynomial at w = 0.
  double omega_sq() const;

  // |gamma1| / |gamma2| (infinity when gamma2 == 0).
  double ratio() const;

  // Throws std::invalid_argument when time < 0 or both couplings vanish.
  void validate() const;

  // Builds a config from the reduced pair (ratio, omega_t) with |gamma2| = 1.
  // omega_t is |Omega| t in the oscillatory regime (ratio < 1) and Gamma t in
  // the hyperbolic regime (ratio > 1); ratio == 1 is rejected because the
  // reduced pair cannot pin the time there. Default phases pi/2 (pure
  // imaginary couplings) select the convention in which the Fock amplitudes
  // of the evolved vacuum are real and positive.
  static CouplingConfig from_reduced(double ratio, double omega_t,
                                     double phase1 = 1.5707963267948966,
                                     double phase2 = 1.5707963267948966);
};

// Heisenberg-picture expansion coefficients at time t:
//   a1^dag(t) = f1 a1^dag + f2 a2 + f3 a3
//   a2(t)     = g1 a1^dag + g2 a2 + g3 a3
//   a3(t)     = h1 a1^dag + h2 a2 + h3 a3
struct ModeCoefficients {
  std::array<Complex, 3> f{};
  std::array<Complex, 3> g{};
  std::array<Complex, 3> h{};
  double omega_sq = 0.0;
};

// Mean photon numbers of the three modes for vacuum inputs.
struct Populations {
  double n1 = 0.0;
  double n2 = 0.0;
  double n3 = 0.0;
};

// Coefficients at cfg.time. All three regimes are covered by one evaluation
// path; the Bogoliubov identities |f1|^2-|f2|^2-|f3|^2 = 1 (and cyclic) hold
// to machine precision.
ModeCoefficients heisenberg_coefficients(const CouplingConfig& cfg);

// Same, at an explicitly signed time (used for the seed displacements, which
// involve the backward-evolved coefficients f_j(-t)).
ModeCoefficients heisenberg_coefficients_at(const CouplingConfig& cfg,
                                            double signed_time);

// Closed-form populations; satisfies n1 = n2 + n3 identically.
Populations mode_populations(const CouplingConfig& cfg);

// Populations when mode 1 is seeded with a coherent state |alpha>:
//   n1 -> n1 (1+|alpha|^2) + |alpha|^2, n2/n3 -> n2/n3 (1+|alpha|^2).
Populations seeded_populations(const CouplingConfig& cfg, Complex alpha);

// Balanced working point n2(t) = n3(t) = n for a given |gamma1/gamma2|.
struct SymmetricPoint {
  double omega_t = 0.0;  // smallest non-negative Omega t with cos = r^2/(2-r^2)
  double n = 0.0;        // common population 4 r^2 / (2 - r^2)^2
};

// Empty when ratio > 1 (no balanced crossing in the hyperbolic regime).
std::optional<SymmetricPoint> symmetric_point(double ratio);

// Coupling ratio at which the balanced population equals 1/2, the point of
// maximal symmetric clone fidelity 2/3. Equals 2 - sqrt(2).
double optimal_symmetric_ratio();

// Inverse problem: a config (pure-imaginary couplings, |gamma2| = 1) whose
// vacuum populations are the given n2 > 0, n3 > 0. Used to drive
// population-parameterized protocols from a concrete evolution.
CouplingConfig config_for_populations(double n2, double n3);

}  // namespace trimode::dynamics

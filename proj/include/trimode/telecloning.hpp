#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>

#include "trimode/dynamics.hpp"

namespace trimode::telecloning {

using Complex = std::complex<double>;

// Everything the 1 -> 2 telecloning protocol needs about the resource state:
// the gains kappa_j = sqrt(N_j / (1 + N1)), the populations, and (for a
// seeded resource) the coherent amplitude and Heisenberg coefficients that
// fix the mode displacements.
struct TeleclonePlan {
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double n3 = 0.0;
  std::optional<Complex> seed_alpha;
  std::optional<dynamics::ModeCoefficients> f_coeffs;

  bool seeded() const;
  // Displacements (d1, d2, d3) the seeding applies to the evolved vacuum:
  // (alpha f1, -conj(alpha f2), conj(alpha f3)); zeros when unseeded.
  std::array<Complex, 3> displacements() const;
  void validate() const;

  static TeleclonePlan from_populations(double n2, double n3);
  static TeleclonePlan from_config(const dynamics::CouplingConfig& cfg);
  static TeleclonePlan from_config(const dynamics::CouplingConfig& cfg,
                                   Complex alpha);
};

// Result of a telecloning run. Analytic reports leave the MC fields empty.
struct CloneReport {
  double f2 = 0.0;
  double f3 = 0.0;
  std::optional<double> stderr2;
  std::optional<double> stderr3;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  Complex input_z{};
};

// Heterodyne outcome stream for input |z> against a resource with mode-1
// population n1: complex Gaussian centered at -conj(z) with per-axis
// variance (1 + n1) / 2. Deterministic for a fixed seed (mt19937_64 +
// Box-Muller with fixed 53-bit uniforms, so the stream is identical across
// platforms).
class OutcomeSampler {
 public:
  OutcomeSampler(Complex z, double n1, std::uint64_t seed);

  Complex next();
  double normal();  // standard normal deviate from the same stream

 private:
  std::mt19937_64 rng_;
  Complex center_;
  double axis_sigma_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Coherent amplitudes of the two clones conditioned on outcome beta, before
// the correcting displacement: delta_j = (z + conj(beta)) kappa_j, or for a
// seeded plan zeta_j = (z + conj(beta - d1)) kappa_j + d_j with beta the
// measured (lab-frame) outcome.
std::array<Complex, 2> conditional_amplitudes(Complex z, Complex beta,
                                              const TeleclonePlan& plan);

// Displacement amplitudes removed by the correction unitary; subtracting
// them from the conditional amplitudes centers the clone ensemble on z.
std::array<Complex, 2> correction_displacements(Complex beta,
                                                const TeleclonePlan& plan);

// Clone amplitudes after the correction: c_j = z kappa_j +
// conj(beta - d1) (kappa_j - 1). For an unseeded plan this is the familiar
// z kappa_j + conj(beta)(kappa_j - 1).
std::array<Complex, 2> corrected_clone_amplitudes(Complex z, Complex beta,
                                                  const TeleclonePlan& plan);

// Outcome-averaged fidelities of the two corrected clones,
//   F2 = 1 / (2 + N3 + 2 N2 - 2 sqrt(N2 (N2 + N3 + 1)))
// and the same with the roles of N2, N3 swapped. Independent of z.
std::array<double, 2> clone_fidelities(double n2, double n3);

// Symmetric-case fidelity F(N) = 1 / (2 + 3N - 2 sqrt(N (2N + 1))),
// maximal at N = 1/2 where it reaches 2/3.
double symmetric_fidelity(double n);

// Best fidelity pair on the asymmetric trade-off curve for a target F3 in
// [1/2, 2/3]: populations N2 = 1/F3 - 1, N3 = 1/(4 N2), and
// F2 = 4 (1 - F3) / (4 - 3 F3).
struct FrontierPoint {
  double n2 = 0.0;
  double n3 = 0.0;
  double f2 = 0.0;
};

FrontierPoint asymmetric_frontier(double f3_target);

// Monte-Carlo run of the full protocol: sample outcomes, apply the
// correction, score each clone with the exact coherent overlap
// exp(-|c_j - z|^2). Seeded runs (alpha set) go through the displaced
// resource and must reproduce the unseeded fidelities. samples >= 1000.
CloneReport mc_teleclone(Complex z, const dynamics::CouplingConfig& cfg,
                         std::optional<Complex> alpha, std::size_t samples,
                         std::uint64_t rng_seed);

}  // namespace trimode::telecloning

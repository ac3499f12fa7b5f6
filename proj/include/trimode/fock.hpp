#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "trimode/dynamics.hpp"
#include "trimode/gaussian.hpp"

namespace trimode::fock {

using Complex = std::complex<double>;

// Raised when a requested truncation would silently drop more than the
// allowed probability mass.
class TailBoundError : public std::runtime_error {
 public:
  TailBoundError(double bound, double limit)
      : std::runtime_error("truncation tail bound " + std::to_string(bound) +
                           " exceeds limit " + std::to_string(limit) +
                           "; raise the cutoff or override explicitly"),
        bound_(bound),
        limit_(limit) {}
  double bound() const { return bound_; }
  double limit() const { return limit_; }

 private:
  double bound_;
  double limit_;
};

// Truncated three-mode pure state. The evolved vacuum lives on the plane
// n1 = n2 + n3 and is stored as a compact (n2, n3) sheet; seeded states use
// the full dense (n1, n2, n3) tensor. tail_bound is an upper bound on the
// probability mass outside the cutoff cube (exact for the supported builders,
// up to rounding).
class TriFockState {
 public:
  enum class Layout { kPairSheet, kDense };

  TriFockState(int cutoff, Layout layout, std::vector<Complex> amps,
               double tail_bound);

  int cutoff() const { return cutoff_; }
  Layout layout() const { return layout_; }
  double tail_bound() const { return tail_bound_; }
  Complex amplitude(int n1, int n2, int n3) const;
  double norm_sq() const;

  // Full (cutoff+1)^3 tensor, row-major with n1 slowest.
  std::vector<Complex> dense() const;

  const std::vector<Complex>& raw() const { return amps_; }

 private:
  int cutoff_;
  Layout layout_;
  std::vector<Complex> amps_;
  double tail_bound_;
};

// Default truncation policy: smallest cutoff whose geometric tail
// (n1/(1+n1))^(cutoff+1) stays below 1e-6, floored at 8 and capped at 128;
// seeded states add a 6-sigma margin for the largest coherent displacement
// mu = max_j |d_j|^2.
int default_cutoff(double n1, double mu_max = 0.0);

// Mass of the displaced-thermal mode-1 photon distribution above the cutoff;
// this equals the mass the cube truncation discards. dsq is the squared
// coherent displacement (0 for the plain evolved vacuum).
double truncation_tail(double n_thermal, double dsq, int cutoff);

// Evolved vacuum, amplitudes on |n2+n3, n2, n3>. cutoff < 0 selects the
// default policy. Throws TailBoundError above max_tail unless overridden.
TriFockState build_vacuum_state(const dynamics::CouplingConfig& cfg,
                                int cutoff = -1, double max_tail = 0.01);

// Coherently seeded evolution (mode 1 starts in |alpha>), built from the
// factored triple sum; equals the triple displacement of the evolved vacuum
// with amplitudes (alpha f1(-t), -conj(alpha f2(-t)), -conj(alpha f3(-t))).
TriFockState build_seeded_state(const dynamics::CouplingConfig& cfg,
                                Complex alpha, int cutoff = -1,
                                double max_tail = 0.01);

// Displacement amplitudes applied to the evolved vacuum by the seeding.
std::array<Complex, 3> seed_displacements(const dynamics::CouplingConfig& cfg,
                                          Complex alpha);

// First and second quadrature moments of the (renormalized) truncated state.
struct StateMoments {
  dynamics::Populations populations;
  gaussian::Covariance6 covariance;     // centered, vacuum = identity
  std::array<Complex, 3> means{};       // <a_j>
};

StateMoments moments(const TriFockState& state);

// Reduced density matrix over a subset of modes (1-based labels, size 1 or
// 2), normalized to unit trace. Basis index is built cutoff+1-adically in the
// order the modes are listed.
struct DensityMatrix {
  std::vector<int> modes;
  int dim = 0;  // per-mode dimension (cutoff + 1)
  Eigen::MatrixXcd rho;
};

DensityMatrix reduce(const TriFockState& state, const std::vector<int>& keep);

// Matrix elements <m|D(alpha)|n> of the displacement operator, dim x dim.
Eigen::MatrixXcd displacement_matrix(Complex alpha, int dim);

// D1(d1) x D2(d2) x D3(d3) applied in the truncated space.
TriFockState displaced(const TriFockState& state,
                       const std::array<Complex, 3>& amps);

// Binary amplitude dump, little-endian: uint32 cutoff, uint32 mode count (3),
// then the dense row-major tensor as (re, im) double pairs.
void write_binary(const TriFockState& state, const std::string& path);

}  // namespace trimode::fock

#pragma once

#include <optional>

#include "trimode/fock.hpp"

namespace trimode::conditional {

// Probability that an on/off detector of efficiency eta on the mode with
// population n3 does not click: 1 / (1 + eta n3).
double no_click_probability(double n3, double eta);

// Two-mode state left on the other modes after a no-click event on
// conditioned_mode (1-based, default mode 3): the (1-eta)^m weighted partial
// trace, renormalized to unit trace. eta = 0 reduces to the plain partial
// trace; eta = 1 keeps only the conditioned mode's vacuum slice.
fock::DensityMatrix conditional_density(const fock::TriFockState& state,
                                        double eta, int conditioned_mode = 3);

// Residual photon-number correlation of the conditional state,
//   zeta12 = n3 (1-eta) (1+n3) / ((1+eta n3) (2 n2 + n3 (1-eta))),
// zero exactly for a twin-beam state. Throws std::domain_error where the
// denominator vanishes (n2 = 0 with n3 = 0 or eta = 1).
double photon_correlation(double n2, double n3, double eta);

// Fidelity of the conditional state against a twin-beam state of parameter
// xi. With xi omitted, evaluates at the maximizing xi* = sqrt(n2/(1+n1)),
// where the fidelity takes the closed form (1 + eta n3) / (1 + n3).
struct TwbFidelity {
  double fid = 0.0;
  double xi_star = 0.0;
};

TwbFidelity twb_fidelity(double n2, double n3, double eta,
                         std::optional<double> xi = std::nullopt);

// Bundle of the scalar no-click figures of merit for one (n2, n3, eta).
struct TwbReport {
  double p0 = 0.0;
  double zeta12 = 0.0;
  double fid = 0.0;
  double xi_star = 0.0;
  double eta = 0.0;
};

TwbReport twb_report(double n2, double n3, double eta,
                     std::optional<double> xi = std::nullopt);

}  // namespace trimode::conditional

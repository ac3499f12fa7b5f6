#pragma once

#include <string>
#include <vector>

namespace trimode::classical {

// Parameters of the classical three-wave energy-transfer model. Defaults are
// the crystal couplings, seed/pump energies, interaction length, and
// frequency ratio of the reference experiment.
struct ClassicalParams {
  double c1 = 8.3e4;                   // 1/(J m^2)
  double c2 = 2.6e5;                   // 1/(J m^2)
  double e1 = 0.024;                   // J
  double e4 = 0.158;                   // J
  double z = 0.004;                    // m
  double omega_ratio = 1064.0 / 355.0; // omega_2 / omega_1

  void validate() const;  // all entries must be positive
};

// Predicted output energy E2 for pump energy e5 (joules):
//   E2 = (w2/w1) c1 E4 c2 E5 E1 * [ (1 - cos(sqrt(c2 E5 - c1 E4) z))
//                                   / (c2 E5 - c1 E4) ]^2,
// continued through cosh below c2 E5 = c1 E4 and through the removable
// singularity at equality (same kernel as the dynamics coefficients).
double output_energy(double e5, const ClassicalParams& p = {});

// Pump energy where the two branches meet: c1 e4 / c2.
double branch_point(const ClassicalParams& p = {});

struct SweepRow {
  double e5 = 0.0;
  double e2 = 0.0;
};

// output_energy over a sorted grid of pump energies.
std::vector<SweepRow> sweep(const std::vector<double>& e5_grid,
                            const ClassicalParams& p = {});

// Comparison of the model against a measured CSV file with header columns
// e5_joules, e2_joules. Malformed rows are reported with their line number.
struct ComparisonRow {
  double e5 = 0.0;
  double measured = 0.0;
  double predicted = 0.0;
  double residual = 0.0;  // measured - predicted
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double max_abs_residual = 0.0;
  double rms_residual = 0.0;
};

ComparisonReport compare_measurements(const std::string& path,
                                      const ClassicalParams& p = {});

}  // namespace trimode::classical

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trimode/classical.hpp"
#include "trimode/dynamics.hpp"

namespace trimode::cli {

// Carries every violation found in one validation pass, so a bad config is
// reported in full rather than one complaint at a time.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Union of every run parameter the tools accept; unset fields fall back to
// per-command defaults. Values arrive from key=value config text or from
// command-line flags (flags win).
struct RunConfig {
  // coupling specification: reduced (ratio, omega_t) or explicit polar
  std::optional<double> ratio;
  std::optional<double> omega_t;
  std::optional<double> gamma1_mag;
  std::optional<double> gamma1_phase;
  std::optional<double> gamma2_mag;
  std::optional<double> gamma2_phase;
  std::optional<double> time;
  std::optional<bool> symmetric;  // pick omega_t at the symmetric point

  // protocol inputs
  std::optional<double> alpha_re, alpha_im;  // crystal seed
  std::optional<double> z_re, z_im;          // telecloning input amplitude
  std::optional<double> eta;
  std::optional<double> xi;
  std::optional<double> n2, n3;
  std::optional<double> f3;
  std::optional<int> cutoff;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> rng_seed;

  // eta sweep (twb)
  std::optional<double> eta_from, eta_to;
  std::optional<int> eta_steps;

  // classical model
  std::optional<double> from, to;
  std::optional<int> steps;
  std::optional<double> c1, c2, e1, e4, length, omega_ratio;
  std::optional<bool> mj;  // --from/--to given in millijoules
  std::optional<std::string> data;

  // output
  std::optional<std::string> output;
  std::optional<std::string> format;  // json | csv

  // Fields set in `overrides` replace this config's values.
  void merge_from(const RunConfig& overrides);

  // Set fields as (key, value) pairs; parsing them back yields an equal
  // config (doubles are printed with enough digits to round-trip).
  std::vector<std::pair<std::string, std::string>> to_key_values() const;

  // Range checks shared by the file parser and the flag path; returns every
  // violation found.
  std::vector<std::string> range_violations() const;

  // Resolved values (throw ConfigError listing what is missing or clashing).
  dynamics::CouplingConfig coupling() const;
  std::optional<std::complex<double>> seed_alpha() const;
  std::complex<double> input_z() const;  // defaults to 1 + 0i
  classical::ClassicalParams classical_params() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

// Parse key=value lines ('#' starts a comment). Collects all problems --
// unknown keys, duplicates, unparsable values, range violations -- into one
// ConfigError.
RunConfig parse_config(const std::string& text);

}  // namespace trimode::cli

#include "trimode/run_config.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

namespace trimode::cli {

namespace {

using DoubleField = std::optional<double> RunConfig::*;
using IntField = std::optional<int> RunConfig::*;
using BoolField = std::optional<bool> RunConfig::*;
using StringField = std::optional<std::string> RunConfig::*;

// Key tables drive parsing, serialization, and equality, so the three stay
// in sync by construction. Order here is the canonical echo order.
constexpr std::pair<const char*, DoubleField> kDoubleKeys[] = {
    {"ratio", &RunConfig::ratio},
    {"omega_t", &RunConfig::omega_t},
    {"gamma1_mag", &RunConfig::gamma1_mag},
    {"gamma1_phase", &RunConfig::gamma1_phase},
    {"gamma2_mag", &RunConfig::gamma2_mag},
    {"gamma2_phase", &RunConfig::gamma2_phase},
    {"time", &RunConfig::time},
    {"alpha_re", &RunConfig::alpha_re},
    {"alpha_im", &RunConfig::alpha_im},
    {"z_re", &RunConfig::z_re},
    {"z_im", &RunConfig::z_im},
    {"eta", &RunConfig::eta},
    {"xi", &RunConfig::xi},
    {"n2", &RunConfig::n2},
    {"n3", &RunConfig::n3},
    {"f3", &RunConfig::f3},
    {"eta_from", &RunConfig::eta_from},
    {"eta_to", &RunConfig::eta_to},
    {"from", &RunConfig::from},
    {"to", &RunConfig::to},
    {"c1", &RunConfig::c1},
    {"c2", &RunConfig::c2},
    {"e1", &RunConfig::e1},
    {"e4", &RunConfig::e4},
    {"length", &RunConfig::length},
    {"omega_ratio", &RunConfig::omega_ratio},
};

constexpr std::pair<const char*, IntField> kIntKeys[] = {
    {"cutoff", &RunConfig::cutoff},
    {"eta_steps", &RunConfig::eta_steps},
    {"steps", &RunConfig::steps},
};

constexpr std::pair<const char*, BoolField> kBoolKeys[] = {
    {"symmetric", &RunConfig::symmetric},
    {"mj", &RunConfig::mj},
};

constexpr std::pair<const char*, StringField> kStringKeys[] = {
    {"data", &RunConfig::data},
    {"output", &RunConfig::output},
    {"format", &RunConfig::format},
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::optional<double> parse_double(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<long long> parse_integer(const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<std::uint64_t> parse_unsigned(const std::string& text) {
  if (!text.empty() && text[0] == '-') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<bool> parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  return std::nullopt;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::string join(const std::vector<std::string>& parts) {
  std::string text = "invalid configuration:";
  for (const auto& p : parts) text += "\n  - " + p;
  return text;
}

auto tied(const RunConfig& c) {
  return std::tie(c.ratio, c.omega_t, c.gamma1_mag, c.gamma1_phase,
                  c.gamma2_mag, c.gamma2_phase, c.time, c.symmetric,
                  c.alpha_re, c.alpha_im, c.z_re, c.z_im, c.eta, c.xi, c.n2,
                  c.n3, c.f3, c.cutoff, c.samples, c.rng_seed, c.eta_from,
                  c.eta_to, c.eta_steps, c.from, c.to, c.steps, c.c1, c.c2,
                  c.e1, c.e4, c.length, c.omega_ratio, c.mj, c.data, c.output,
                  c.format);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

void RunConfig::merge_from(const RunConfig& overrides) {
  for (const auto& [name, field] : kDoubleKeys)
    if (overrides.*field) this->*field = overrides.*field;
  for (const auto& [name, field] : kIntKeys)
    if (overrides.*field) this->*field = overrides.*field;
  for (const auto& [name, field] : kBoolKeys)
    if (overrides.*field) this->*field = overrides.*field;
  for (const auto& [name, field] : kStringKeys)
    if (overrides.*field) this->*field = overrides.*field;
  if (overrides.samples) samples = overrides.samples;
  if (overrides.rng_seed) rng_seed = overrides.rng_seed;
}

std::vector<std::pair<std::string, std::string>> RunConfig::to_key_values()
    const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : kDoubleKeys)
    if (this->*field) out.emplace_back(name, format_double(*(this->*field)));
  for (const auto& [name, field] : kIntKeys)
    if (this->*field) out.emplace_back(name, std::to_string(*(this->*field)));
  if (samples) out.emplace_back("samples", std::to_string(*samples));
  if (rng_seed) out.emplace_back("rng_seed", std::to_string(*rng_seed));
  for (const auto& [name, field] : kBoolKeys)
    if (this->*field)
      out.emplace_back(name, *(this->*field) ? "true" : "false");
  for (const auto& [name, field] : kStringKeys)
    if (this->*field) out.emplace_back(name, *(this->*field));
  return out;
}

std::vector<std::string> RunConfig::range_violations() const {
  std::vector<std::string> issues;
  const auto need = [&](bool ok, const char* msg) {
    if (!ok) issues.emplace_back(msg);
  };
  need(!ratio || *ratio >= 0.0, "ratio must be >= 0");
  need(!omega_t || *omega_t >= 0.0, "omega_t must be >= 0");
  need(!gamma1_mag || *gamma1_mag >= 0.0, "gamma1_mag must be >= 0");
  need(!gamma2_mag || *gamma2_mag >= 0.0, "gamma2_mag must be >= 0");
  need(!eta || (*eta >= 0.0 && *eta <= 1.0), "eta must lie in [0, 1]");
  need(!xi || std::abs(*xi) < 1.0, "xi must satisfy |xi| < 1");
  need(!n2 || *n2 >= 0.0, "n2 must be >= 0");
  need(!n3 || *n3 >= 0.0, "n3 must be >= 0");
  need(!f3 || (*f3 >= 0.5 && *f3 <= 2.0 / 3.0 + 1e-15),
       "f3 must lie in [1/2, 2/3]");
  need(!cutoff || (*cutoff >= 0 && *cutoff <= 128),
       "cutoff must lie in [0, 128]");
  need(!samples || *samples >= 1000, "samples must be >= 1000");
  need(!eta_from || (*eta_from >= 0.0 && *eta_from <= 1.0),
       "eta_from must lie in [0, 1]");
  need(!eta_to || (*eta_to >= 0.0 && *eta_to <= 1.0),
       "eta_to must lie in [0, 1]");
  need(!(eta_from && eta_to) || *eta_to >= *eta_from,
       "eta_to must be >= eta_from");
  need(!eta_steps || *eta_steps >= 1, "eta_steps must be >= 1");
  need(!from || *from >= 0.0, "from must be >= 0");
  need(!to || *to >= 0.0, "to must be >= 0");
  need(!(from && to) || *to >= *from, "to must be >= from");
  need(!steps || *steps >= 1, "steps must be >= 1");
  need(!c1 || *c1 > 0.0, "c1 must be > 0");
  need(!c2 || *c2 > 0.0, "c2 must be > 0");
  need(!e1 || *e1 > 0.0, "e1 must be > 0");
  need(!e4 || *e4 > 0.0, "e4 must be > 0");
  need(!length || *length > 0.0, "length must be > 0");
  need(!omega_ratio || *omega_ratio > 0.0, "omega_ratio must be > 0");
  need(!format || *format == "json" || *format == "csv",
       "format must be json or csv");
  return issues;
}

dynamics::CouplingConfig RunConfig::coupling() const {
  const bool wants_symmetric = symmetric.value_or(false);
  const bool has_reduced = ratio || omega_t || wants_symmetric;
  const bool has_explicit =
      gamma1_mag || gamma1_phase || gamma2_mag || gamma2_phase || time;
  if (has_reduced && has_explicit)
    throw ConfigError(
        {"coupling given both as (ratio, omega_t) and as explicit "
         "gamma/time values; pick one"});
  if (!has_reduced && !has_explicit)
    throw ConfigError(
        {"no coupling specified: set ratio and omega_t (or symmetric), or "
         "gamma1_mag, gamma2_mag and time"});

  std::vector<std::string> issues;
  if (has_explicit) {
    if (!gamma1_mag) issues.emplace_back("explicit coupling needs gamma1_mag");
    if (!gamma2_mag) issues.emplace_back("explicit coupling needs gamma2_mag");
    if (!time) issues.emplace_back("explicit coupling needs time");
    if (!issues.empty()) throw ConfigError(std::move(issues));
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    return {std::polar(*gamma1_mag, gamma1_phase.value_or(kHalfPi)),
            std::polar(*gamma2_mag, gamma2_phase.value_or(kHalfPi)), *time};
  }

  if (!ratio) issues.emplace_back("reduced coupling needs ratio");
  double wt = 0.0;
  if (omega_t) {
    wt = *omega_t;
  } else if (wants_symmetric && ratio) {
    const auto point = dynamics::symmetric_point(*ratio);
    if (!point)
      issues.emplace_back(
          "no symmetric operating point exists for ratio >= 1");
    else
      wt = point->omega_t;
  } else if (!wants_symmetric) {
    issues.emplace_back("reduced coupling needs omega_t (or symmetric=true)");
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  try {
    return dynamics::CouplingConfig::from_reduced(*ratio, wt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError({e.what()});
  }
}

std::optional<std::complex<double>> RunConfig::seed_alpha() const {
  if (!alpha_re && !alpha_im) return std::nullopt;
  return std::complex<double>{alpha_re.value_or(0.0), alpha_im.value_or(0.0)};
}

std::complex<double> RunConfig::input_z() const {
  return {z_re.value_or(1.0), z_im.value_or(0.0)};
}

classical::ClassicalParams RunConfig::classical_params() const {
  classical::ClassicalParams p;
  if (c1) p.c1 = *c1;
  if (c2) p.c2 = *c2;
  if (e1) p.e1 = *e1;
  if (e4) p.e4 = *e4;
  if (length) p.z = *length;
  if (omega_ratio) p.omega_ratio = *omega_ratio;
  return p;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return tied(a) == tied(b);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::vector<std::string> issues;
  std::set<std::string> seen;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(line_no) +
                       ": expected key=value, got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      issues.push_back("duplicate key '" + key + "'");
      continue;
    }

    const auto bad_value = [&] {
      issues.push_back("key '" + key + "': cannot parse value '" + value +
                       "'");
    };
    bool handled = false;
    for (const auto& [name, field] : kDoubleKeys) {
      if (key != name) continue;
      handled = true;
      if (const auto v = parse_double(value)) cfg.*field = *v;
      else bad_value();
      break;
    }
    if (!handled)
      for (const auto& [name, field] : kIntKeys) {
        if (key != name) continue;
        handled = true;
        if (const auto v = parse_integer(value);
            v && *v >= INT_MIN && *v <= INT_MAX)
          cfg.*field = static_cast<int>(*v);
        else bad_value();
        break;
      }
    if (!handled)
      for (const auto& [name, field] : kBoolKeys) {
        if (key != name) continue;
        handled = true;
        if (const auto v = parse_bool(value)) cfg.*field = *v;
        else bad_value();
        break;
      }
    if (!handled)
      for (const auto& [name, field] : kStringKeys) {
        if (key != name) continue;
        handled = true;
        cfg.*field = value;
        break;
      }
    if (!handled && key == "samples") {
      handled = true;
      if (const auto v = parse_unsigned(value))
        cfg.samples = static_cast<std::size_t>(*v);
      else bad_value();
    }
    if (!handled && key == "rng_seed") {
      handled = true;
      if (const auto v = parse_unsigned(value)) cfg.rng_seed = *v;
      else bad_value();
    }
    if (!handled) issues.push_back("unknown key '" + key + "'");
  }

  const auto ranges = cfg.range_violations();
  issues.insert(issues.end(), ranges.begin(), ranges.end());
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

}  // namespace trimode::cli

// Command-line front end: every computation as a subcommand emitting JSON or
// CSV reports. Exit codes: 0 success, 2 configuration error, 3 numerical
// contract violation (truncation tail above the allowed bound).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trimode/classical.hpp"
#include "trimode/conditional.hpp"
#include "trimode/dynamics.hpp"
#include "trimode/fock.hpp"
#include "trimode/gaussian.hpp"
#include "trimode/run_config.hpp"
#include "trimode/telecloning.hpp"

namespace {

using json = nlohmann::ordered_json;
using trimode::cli::ConfigError;
using trimode::cli::RunConfig;
using Complex = std::complex<double>;

std::string iso_timestamp() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json complex_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

json coefficient_json(const std::array<Complex, 3>& a) {
  return json::array({complex_json(a[0]), complex_json(a[1]), complex_json(a[2])});
}

json populations_json(const trimode::dynamics::Populations& p) {
  return json{{"n1", p.n1}, {"n2", p.n2}, {"n3", p.n3}};
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [key, value] : cfg.to_key_values()) j[key] = value;
  return j;
}

// The report header; generated_at is the only timestamp anywhere in the
// output, so byte comparison after dropping that line checks determinism.
json report_shell(const std::string& command, const RunConfig& cfg) {
  json j;
  j["command"] = command;
  j["generated_at"] = iso_timestamp();
  j["config"] = config_json(cfg);
  return j;
}

std::string resolve_output(const std::string& path) {
  if (!path.empty() && path.front() == '/') return path;
  if (const char* dir = std::getenv("TRIMODE_OUTPUT_DIR"))
    return std::string(dir) + "/" + path;
  return path;
}

void emit(const std::optional<std::string>& output, const std::string& text) {
  if (!output) {
    std::cout << text;
    return;
  }
  const std::string path = resolve_output(*output);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

void emit_report(const RunConfig& cfg, const json& report) {
  emit(cfg.output, report.dump(2) + "\n");
}

std::string format_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> linspace(double from, double to, int steps) {
  std::vector<double> grid;
  grid.reserve(steps);
  if (steps == 1) {
    grid.push_back(from);
    return grid;
  }
  const double step = (to - from) / (steps - 1);
  for (int i = 0; i < steps; ++i) grid.push_back(from + step * i);
  grid.back() = to;
  return grid;
}

// ---------------------------------------------------------------- commands

void cmd_dynamics(const RunConfig& rc) {
  const auto cfg = rc.coupling();
  const auto mc = trimode::dynamics::heisenberg_coefficients(cfg);
  const auto pops = trimode::dynamics::mode_populations(cfg);
  json report = report_shell("dynamics", rc);
  json result;
  result["omega_sq"] = mc.omega_sq;
  result["coefficients"] = {{"f", coefficient_json(mc.f)},
                            {"g", coefficient_json(mc.g)},
                            {"h", coefficient_json(mc.h)}};
  result["populations"] = populations_json(pops);
  result["delta"] = pops.n1 - pops.n2 - pops.n3;
  if (const auto alpha = rc.seed_alpha()) {
    const auto seeded = trimode::dynamics::seeded_populations(cfg, *alpha);
    result["seed_alpha"] = complex_json(*alpha);
    result["seeded_populations"] = populations_json(seeded);
    result["seeded_delta"] = seeded.n1 - seeded.n2 - seeded.n3;
  }
  report["result"] = result;
  emit_report(rc, report);
}

void cmd_covariance(const RunConfig& rc) {
  const auto cfg = rc.coupling();
  const auto cov = trimode::gaussian::covariance_from_couplings(cfg);
  const auto pops = trimode::dynamics::mode_populations(cfg);
  json rows = json::array();
  for (int i = 0; i < 6; ++i) {
    json row = json::array();
    for (int j = 0; j < 6; ++j) row.push_back(cov.m(i, j));
    rows.push_back(row);
  }
  json report = report_shell("covariance", rc);
  report["result"] = {{"matrix", rows}, {"populations", populations_json(pops)}};
  emit_report(rc, report);
}

void cmd_ppt(const RunConfig& rc) {
  const auto cfg = rc.coupling();
  const auto cov = trimode::gaussian::covariance_from_couplings(cfg);
  const auto ppt = trimode::gaussian::ppt_test(cov);
  json report = report_shell("ppt", rc);
  report["result"] = {
      {"min_eigenvalues",
       json::array({ppt.min_eig[0], ppt.min_eig[1], ppt.min_eig[2]})},
      {"tolerance", ppt.tolerance},
      {"fully_inseparable", ppt.fully_inseparable}};
  emit_report(rc, report);
}

void cmd_state(const RunConfig& rc) {
  const auto cfg = rc.coupling();
  const int cutoff = rc.cutoff.value_or(-1);
  const auto alpha = rc.seed_alpha();
  const auto state =
      alpha ? trimode::fock::build_seeded_state(cfg, *alpha, cutoff)
            : trimode::fock::build_vacuum_state(cfg, cutoff);
  const auto mom = trimode::fock::moments(state);
  json report = report_shell("state", rc);
  json result;
  result["cutoff"] = state.cutoff();
  result["layout"] =
      state.layout() == trimode::fock::TriFockState::Layout::kPairSheet
          ? "pair-sheet"
          : "dense";
  result["tail_bound"] = state.tail_bound();
  result["norm_sq"] = state.norm_sq();
  result["populations"] = populations_json(mom.populations);
  if (rc.output) {
    const std::string path = resolve_output(*rc.output);
    trimode::fock::write_binary(state, path);
    result["amplitudes_written_to"] = path;
  }
  report["result"] = result;
  // the JSON summary always goes to stdout; --output holds the binary dump
  std::cout << report.dump(2) << "\n";
}

void resolve_clone_populations(const RunConfig& rc, double& n2, double& n3) {
  if (rc.n2 || rc.n3) {
    if (!rc.n2 || !rc.n3)
      throw ConfigError({"set both n2 and n3 (or neither)"});
    n2 = *rc.n2;
    n3 = *rc.n3;
    return;
  }
  const auto pops = trimode::dynamics::mode_populations(rc.coupling());
  n2 = pops.n2;
  n3 = pops.n3;
}

void cmd_teleclone(const RunConfig& rc) {
  json report = report_shell("teleclone", rc);
  json result;
  double n2 = 0.0, n3 = 0.0;
  if (rc.f3) {
    const auto point = trimode::telecloning::asymmetric_frontier(*rc.f3);
    n2 = point.n2;
    n3 = point.n3;
    result["frontier"] = {{"f3_target", *rc.f3},
                          {"n2", point.n2},
                          {"n3", point.n3},
                          {"f2", point.f2}};
  } else {
    resolve_clone_populations(rc, n2, n3);
  }
  const auto plan = trimode::telecloning::TeleclonePlan::from_populations(n2, n3);
  const auto fid = trimode::telecloning::clone_fidelities(n2, n3);
  result["n2"] = n2;
  result["n3"] = n3;
  result["kappa2"] = plan.kappa2;
  result["kappa3"] = plan.kappa3;
  result["f2"] = fid[0];
  result["f3"] = fid[1];
  result["stderr2"] = nullptr;
  result["stderr3"] = nullptr;
  result["samples"] = nullptr;
  result["seed"] = nullptr;
  report["result"] = result;
  emit_report(rc, report);
}

void cmd_teleclone_mc(const RunConfig& rc) {
  const auto cfg = rc.coupling();
  const Complex z = rc.input_z();
  const auto report_data = trimode::telecloning::mc_teleclone(
      z, cfg, rc.seed_alpha(), rc.samples.value_or(100000),
      rc.rng_seed.value_or(12345));
  const auto pops = trimode::dynamics::mode_populations(cfg);
  const auto analytic = trimode::telecloning::clone_fidelities(pops.n2, pops.n3);
  json report = report_shell("teleclone-mc", rc);
  report["result"] = {{"f2", report_data.f2},
                      {"f3", report_data.f3},
                      {"stderr2", *report_data.stderr2},
                      {"stderr3", *report_data.stderr3},
                      {"samples", *report_data.samples},
                      {"seed", *report_data.seed},
                      {"input_z", complex_json(report_data.input_z)},
                      {"analytic_f2", analytic[0]},
                      {"analytic_f3", analytic[1]}};
  emit_report(rc, report);
}

void cmd_twb(const RunConfig& rc) {
  double n2 = 0.0, n3 = 0.0;
  resolve_clone_populations(rc, n2, n3);
  const bool sweep = rc.eta_steps || rc.eta_from || rc.eta_to;
  if (sweep) {
    const double lo = rc.eta_from.value_or(0.0);
    const double hi = rc.eta_to.value_or(1.0);
    const int steps = rc.eta_steps.value_or(11);
    std::ostringstream csv;
    csv << "n2,n3,eta,p0,zeta12,fid\n";
    for (double eta : linspace(lo, hi, steps)) {
      const auto row = trimode::conditional::twb_report(n2, n3, eta, rc.xi);
      csv << format_cell(n2) << ',' << format_cell(n3) << ','
          << format_cell(eta) << ',' << format_cell(row.p0) << ','
          << format_cell(row.zeta12) << ',' << format_cell(row.fid) << '\n';
    }
    emit(rc.output, csv.str());
    return;
  }
  if (!rc.eta) throw ConfigError({"twb needs eta (or an eta sweep range)"});
  const auto row = trimode::conditional::twb_report(n2, n3, *rc.eta, rc.xi);
  json report = report_shell("twb", rc);
  report["result"] = {{"n2", n2},           {"n3", n3},
                      {"eta", row.eta},     {"p0", row.p0},
                      {"zeta12", row.zeta12}, {"fid", row.fid},
                      {"xi_star", row.xi_star}};
  emit_report(rc, report);
}

void cmd_classical_sweep(const RunConfig& rc) {
  const auto params = rc.classical_params();
  const double unit = rc.mj.value_or(false) ? 1e-3 : 1.0;
  const double from = rc.from.value_or(0.0) * unit;
  const double to = rc.to.value_or(0.1) * unit;
  const int steps = rc.steps.value_or(50);
  if (to < from) throw ConfigError({"to must be >= from"});
  const auto rows = trimode::classical::sweep(linspace(from, to, steps), params);
  if (rc.format.value_or("csv") == "json") {
    json list = json::array();
    for (const auto& row : rows)
      list.push_back({{"e5_joules", row.e5}, {"e2_joules", row.e2}});
    json report = report_shell("classical-sweep", rc);
    report["result"] = {{"rows", list}};
    emit_report(rc, report);
    return;
  }
  std::ostringstream csv;
  csv << "e5_joules,e2_joules\n";
  for (const auto& row : rows)
    csv << format_cell(row.e5) << ',' << format_cell(row.e2) << '\n';
  emit(rc.output, csv.str());
}

void cmd_classical_compare(const RunConfig& rc) {
  if (!rc.data) throw ConfigError({"classical-compare needs data=<csv path>"});
  const auto result =
      trimode::classical::compare_measurements(*rc.data, rc.classical_params());
  json rows = json::array();
  for (const auto& row : result.rows)
    rows.push_back({{"e5_joules", row.e5},
                    {"measured", row.measured},
                    {"predicted", row.predicted},
                    {"residual", row.residual}});
  json report = report_shell("classical-compare", rc);
  report["result"] = {{"rows", rows},
                      {"count", result.rows.size()},
                      {"max_abs_residual", result.max_abs_residual},
                      {"rms_residual", result.rms_residual}};
  emit_report(rc, report);
}

// ------------------------------------------------------------------- wiring

struct CommandCtx {
  RunConfig flags;
  std::string config_file;
  std::function<void(const RunConfig&)> handler;
};

void add_coupling_flags(CLI::App* cmd, RunConfig& f) {
  cmd->add_option("--ratio", f.ratio, "coupling ratio |gamma1| / |gamma2|");
  cmd->add_option("--omega-t", f.omega_t,
                  "scaled time: |Omega| t below ratio 1, Gamma t above");
  cmd->add_flag_callback(
      "--symmetric", [&f] { f.symmetric = true; },
      "run at the symmetric operating point of the given ratio");
  cmd->add_option("--gamma1-mag", f.gamma1_mag, "|gamma1| (explicit route)");
  cmd->add_option("--gamma1-phase", f.gamma1_phase,
                  "arg(gamma1), default pi/2");
  cmd->add_option("--gamma2-mag", f.gamma2_mag, "|gamma2| (explicit route)");
  cmd->add_option("--gamma2-phase", f.gamma2_phase,
                  "arg(gamma2), default pi/2");
  cmd->add_option("--time", f.time, "interaction time (explicit route)");
}

void add_seed_flags(CLI::App* cmd, RunConfig& f) {
  cmd->add_option("--alpha-re", f.alpha_re, "crystal seed amplitude, real part");
  cmd->add_option("--alpha-im", f.alpha_im,
                  "crystal seed amplitude, imaginary part");
}

void add_population_flags(CLI::App* cmd, RunConfig& f) {
  cmd->add_option("--n2", f.n2, "clone-mode population N2");
  cmd->add_option("--n3", f.n3, "clone-mode population N3");
}

void add_classical_flags(CLI::App* cmd, RunConfig& f) {
  cmd->add_option("--c1", f.c1, "first coupling constant, 1/(J m^2)");
  cmd->add_option("--c2", f.c2, "second coupling constant, 1/(J m^2)");
  cmd->add_option("--e1", f.e1, "seed energy E1, J");
  cmd->add_option("--e4", f.e4, "pump energy E4, J");
  cmd->add_option("--length", f.length, "interaction length, m");
  cmd->add_option("--omega-ratio", f.omega_ratio, "frequency ratio w2/w1");
}

void add_output_flags(CLI::App* cmd, RunConfig& f) {
  cmd->add_option("--output", f.output,
                  "write the report here instead of stdout (relative paths "
                  "resolve under $TRIMODE_OUTPUT_DIR)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit_error(const std::string& type, const std::string& message,
                const std::vector<std::string>& issues = {}) {
  json j;
  j["error"] = {{"type", type}, {"message", message}};
  if (!issues.empty()) j["error"]["issues"] = issues;
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-mode parametric entanglement toolkit"};
  app.require_subcommand(1);

  std::vector<std::shared_ptr<CommandCtx>> contexts;
  const auto add_command =
      [&](const std::string& name, const std::string& desc,
          std::function<void(const RunConfig&)> handler,
          const std::function<void(CLI::App*, RunConfig&)>& add_flags) {
        auto ctx = std::make_shared<CommandCtx>();
        ctx->handler = std::move(handler);
        contexts.push_back(ctx);
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->add_option("--config", ctx->config_file,
                        "key=value config file; flags override its values");
        add_flags(cmd, ctx->flags);
        cmd->callback([ctx] {
          RunConfig final_cfg;
          if (!ctx->config_file.empty())
            final_cfg = trimode::cli::parse_config(read_file(ctx->config_file));
          final_cfg.merge_from(ctx->flags);
          if (auto issues = final_cfg.range_violations(); !issues.empty())
            throw ConfigError(std::move(issues));
          ctx->handler(final_cfg);
        });
        return cmd;
      };

  add_command("dynamics", "Heisenberg coefficients and mode populations",
              cmd_dynamics, [](CLI::App* cmd, RunConfig& f) {
                add_coupling_flags(cmd, f);
                add_seed_flags(cmd, f);
                add_output_flags(cmd, f);
              });
  add_command("covariance", "quadrature covariance matrix of the evolved state",
              cmd_covariance, [](CLI::App* cmd, RunConfig& f) {
                add_coupling_flags(cmd, f);
                add_output_flags(cmd, f);
              });
  add_command("ppt", "partial-transpose test for full inseparability",
              cmd_ppt, [](CLI::App* cmd, RunConfig& f) {
                add_coupling_flags(cmd, f);
                add_output_flags(cmd, f);
              });
  add_command("state", "truncated Fock-space state (binary dump via --output)",
              cmd_state, [](CLI::App* cmd, RunConfig& f) {
                add_coupling_flags(cmd, f);
                add_seed_flags(cmd, f);
                cmd->add_option("--cutoff", f.cutoff,
                                "per-mode Fock cutoff (default: tail policy)");
                add_output_flags(cmd, f);
              });
  add_command("teleclone", "analytic telecloning fidelities", cmd_teleclone,
              [](CLI::App* cmd, RunConfig& f) {
                add_coupling_flags(cmd, f);
                add_population_flags(cmd, f);
                cmd->add_option("--f3", f.f3,
                                "asymmetric frontier target fidelity F3");
                add_output_flags(cmd, f);
              });
  add_command("teleclone-mc", "Monte-Carlo telecloning protocol run",
              cmd_teleclone_mc, [](CLI::App* cmd, RunConfig& f) {
                add_coupling_flags(cmd, f);
                add_seed_flags(cmd, f);
                cmd->add_option("--z-re", f.z_re, "input amplitude, real part");
                cmd->add_option("--z-im", f.z_im,
                                "input amplitude, imaginary part");
                cmd->add_option("--samples", f.samples, "MC samples (>= 1000)");
                cmd->add_option("--seed", f.rng_seed, "RNG seed");
                add_output_flags(cmd, f);
              });
  add_command("twb", "conditional twin-beam figures of merit", cmd_twb,
              [](CLI::App* cmd, RunConfig& f) {
                add_coupling_flags(cmd, f);
                add_population_flags(cmd, f);
                cmd->add_option("--eta", f.eta, "detector efficiency");
                cmd->add_option("--xi", f.xi, "twin-beam parameter (|xi| < 1)");
                cmd->add_option("--eta-from", f.eta_from, "eta sweep start");
                cmd->add_option("--eta-to", f.eta_to, "eta sweep end");
                cmd->add_option("--eta-steps", f.eta_steps,
                                "eta sweep row count (CSV output)");
                add_output_flags(cmd, f);
              });
  add_command("classical-sweep", "classical output-energy curve (CSV)",
              cmd_classical_sweep, [](CLI::App* cmd, RunConfig& f) {
                cmd->add_option("--from", f.from, "pump energy sweep start");
                cmd->add_option("--to", f.to, "pump energy sweep end");
                cmd->add_option("--steps", f.steps, "sweep row count");
                cmd->add_flag_callback(
                    "--mj", [&f] { f.mj = true; },
                    "interpret --from/--to in millijoules");
                cmd->add_option("--format", f.format, "csv (default) or json");
                add_classical_flags(cmd, f);
                add_output_flags(cmd, f);
              });
  add_command("classical-compare", "residuals against a measured CSV file",
              cmd_classical_compare, [](CLI::App* cmd, RunConfig& f) {
                cmd->add_option("--data", f.data,
                                "CSV file with e5_joules,e2_joules columns");
                add_classical_flags(cmd, f);
                add_output_flags(cmd, f);
              });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const ConfigError& e) {
    emit_error("config", "invalid configuration", e.issues());
    return 2;
  } catch (const trimode::fock::TailBoundError& e) {
    emit_error("numerical", e.what());
    return 3;
  } catch (const std::domain_error& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
}

#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "trimode/classical.hpp"
#include "trimode/conditional.hpp"
#include "trimode/dynamics.hpp"
#include "trimode/fock.hpp"
#include "trimode/run_config.hpp"
#include "trimode/telecloning.hpp"

using json = nlohmann::json;
using namespace trimode;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

const char* cli_binary() {
  const char* bin = std::getenv("TRIMODE_CLI_BIN");
  REQUIRE_MESSAGE(bin != nullptr,
                  "TRIMODE_CLI_BIN must point at the trimode executable");
  return bin;
}

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + cli_binary() + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    result.out.append(buf, got);
  const int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

json parse_report(const RunResult& r) {
  CAPTURE(r.out);
  REQUIRE(r.status == 0);
  return json::parse(r.out);
}

// Drop the generated_at line so otherwise identical reports compare equal.
std::string without_timestamp(const std::string& text) {
  std::string out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (line.find("\"generated_at\"") == std::string::npos) out += line + "\n";
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::vector<double> split_csv_row(const std::string& line) {
  std::vector<double> cells;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(std::stod(cell));
  return cells;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::current_path() / "cli_test_tmp";
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("help lists every subcommand; a missing subcommand is an error") {
  const auto help = run_cli("--help");
  CHECK(help.status == 0);
  for (const char* name :
       {"dynamics", "covariance", "ppt", "state", "teleclone", "teleclone-mc",
        "twb", "classical-sweep", "classical-compare"})
    CHECK(help.out.find(name) != std::string::npos);

  const auto bare = run_cli("");
  CHECK(bare.status == 2);
  const auto err = json::parse(bare.out);
  CHECK(err["error"]["type"] == "config");

  const auto unknown = run_cli("dynamics --bogus 1");
  CHECK(unknown.status == 2);
  CHECK(json::parse(unknown.out)["error"]["type"] == "config");
}

TEST_CASE("report header carries the command, a timestamp, and the config") {
  const auto report =
      parse_report(run_cli("dynamics --ratio 0.5 --omega-t 1.0"));
  CHECK(report["command"] == "dynamics");
  const std::string stamp = report["generated_at"].get<std::string>();
  CHECK(std::regex_match(
      stamp, std::regex(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)")));
  CHECK(report["config"]["ratio"] == "0.5");
  CHECK(report["config"]["omega_t"] == "1");
}

TEST_CASE("dynamics reports coefficients, populations, and the photon excess") {
  const auto report =
      parse_report(run_cli("dynamics --ratio 0.5 --omega-t 1.0"));
  const auto& result = report["result"];

  const auto cfg = dynamics::CouplingConfig::from_reduced(0.5, 1.0);
  const auto pops = dynamics::mode_populations(cfg);
  CHECK(result["populations"]["n1"].get<double>() ==
        doctest::Approx(pops.n1).epsilon(1e-14));
  CHECK(result["populations"]["n2"].get<double>() ==
        doctest::Approx(pops.n2).epsilon(1e-14));
  CHECK(result["populations"]["n3"].get<double>() ==
        doctest::Approx(pops.n3).epsilon(1e-14));
  CHECK(std::abs(result["delta"].get<double>()) < 1e-12);
  CHECK(result["coefficients"]["f"].size() == 3);
  CHECK(result["coefficients"]["g"].size() == 3);
  CHECK(result["coefficients"]["h"].size() == 3);
  CHECK(result["coefficients"]["f"][0].contains("re"));
  CHECK_FALSE(result.contains("seeded_populations"));

  const auto seeded = parse_report(
      run_cli("dynamics --ratio 0.5 --omega-t 1.0 --alpha-re 1.0"));
  const double d = seeded["result"]["seeded_delta"].get<double>();
  CHECK(d == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("covariance emits the 6x6 matrix consistent with the library") {
  const auto report =
      parse_report(run_cli("covariance --ratio 0.5 --omega-t 1.0"));
  const auto& rows = report["result"]["matrix"];
  REQUIRE(rows.size() == 6);
  const auto cov = gaussian::covariance_from_couplings(
      dynamics::CouplingConfig::from_reduced(0.5, 1.0));
  for (int i = 0; i < 6; ++i) {
    REQUIRE(rows[i].size() == 6);
    for (int j = 0; j < 6; ++j) {
      CHECK(rows[i][j].get<double>() ==
            doctest::Approx(cov.m(i, j)).epsilon(1e-14));
      CHECK(rows[i][j].get<double>() == rows[j][i].get<double>());
    }
  }
}

TEST_CASE("ppt reports three negative symplectic eigenvalues when entangled") {
  const auto report = parse_report(run_cli("ppt --ratio 0.5 --omega-t 1.0"));
  const auto& result = report["result"];
  REQUIRE(result["min_eigenvalues"].size() == 3);
  const double tol = result["tolerance"].get<double>();
  CHECK(tol > 0.0);
  for (int j = 0; j < 3; ++j)
    CHECK(result["min_eigenvalues"][j].get<double>() < -tol);
  CHECK(result["fully_inseparable"] == true);
}

TEST_CASE("state summarizes the truncated state and dumps binary amplitudes") {
  const TempDir dir;
  setenv("TRIMODE_OUTPUT_DIR", dir.path.c_str(), 1);
  const auto run = run_cli(
      "state --ratio 0.5 --omega-t 1.0 --cutoff 12 --output state.bin");
  unsetenv("TRIMODE_OUTPUT_DIR");

  const auto report = parse_report(run);
  const auto& result = report["result"];
  CHECK(result["cutoff"] == 12);
  CHECK(result["layout"] == "pair-sheet");
  CHECK(result["tail_bound"].get<double>() >= 0.0);
  CHECK(result["tail_bound"].get<double>() < 0.01);
  CHECK(result["norm_sq"].get<double>() > 0.99);
  CHECK(result["norm_sq"].get<double>() <= 1.0 + 1e-12);

  const auto state = fock::build_vacuum_state(
      dynamics::CouplingConfig::from_reduced(0.5, 1.0), 12);
  const auto mom = fock::moments(state);
  CHECK(result["populations"]["n1"].get<double>() ==
        doctest::Approx(mom.populations.n1).epsilon(1e-12));

  // binary dump: uint32 cutoff, uint32 mode count, then the dense
  // (cutoff+1)^3 tensor of complex doubles
  const std::string path = (dir.path / "state.bin").string();
  CHECK(result["amplitudes_written_to"] == path);
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::uint32_t cutoff = 0, modes = 0;
  in.read(reinterpret_cast<char*>(&cutoff), 4);
  in.read(reinterpret_cast<char*>(&modes), 4);
  CHECK(cutoff == 12);
  CHECK(modes == 3);
  const std::size_t dim = cutoff + 1;
  in.seekg(0, std::ios::end);
  CHECK(static_cast<std::size_t>(in.tellg()) == 8 + dim * dim * dim * 16);

  const auto dense = state.dense();
  std::ifstream again(path, std::ios::binary);
  again.seekg(8);
  std::vector<std::complex<double>> payload(dense.size());
  again.read(reinterpret_cast<char*>(payload.data()),
             static_cast<std::streamsize>(payload.size() * 16));
  REQUIRE(again.good());
  CHECK(payload == dense);
}

TEST_CASE("teleclone reproduces the analytic fidelities") {
  SUBCASE("symmetric operating point of the optimal ratio") {
    const auto report = parse_report(
        run_cli("teleclone --ratio 0.5857864376269049 --symmetric"));
    const auto& result = report["result"];
    CHECK(result["f2"].get<double>() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(result["f3"].get<double>() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(result["kappa2"].get<double>() ==
          doctest::Approx(result["kappa3"].get<double>()).epsilon(1e-9));
    CHECK(result["samples"].is_null());  // analytic run, no MC fields
  }
  SUBCASE("explicit populations") {
    const auto report = parse_report(run_cli("teleclone --n2 1 --n3 0.25"));
    CHECK(report["result"]["f2"].get<double>() ==
          doctest::Approx(0.8).epsilon(1e-12));
    CHECK(report["result"]["f3"].get<double>() ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("frontier target") {
    const auto report = parse_report(run_cli("teleclone --f3 0.6"));
    const auto& result = report["result"];
    CHECK(result["frontier"]["f3_target"].get<double>() == 0.6);
    CHECK(result["n2"].get<double>() ==
          doctest::Approx(1.0 / 0.6 - 1.0).epsilon(1e-12));
    CHECK(result["f2"].get<double>() ==
          doctest::Approx(8.0 / 11.0).epsilon(1e-12));
    CHECK(result["f3"].get<double>() == doctest::Approx(0.6).epsilon(1e-12));
  }
  SUBCASE("n2 without n3 is rejected") {
    const auto run = run_cli("teleclone --n2 1");
    CHECK(run.status == 2);
    const auto err = json::parse(run.out);
    CHECK(err["error"]["type"] == "config");
  }
}

TEST_CASE("teleclone-mc is deterministic and independent of the input state") {
  const std::string base =
      "teleclone-mc --ratio 0.45 --omega-t 1.0 --samples 2000 --seed 77";
  const auto first = run_cli(base);
  const auto second = run_cli(base);
  REQUIRE(first.status == 0);
  CHECK(without_timestamp(first.out) == without_timestamp(second.out));

  const auto report = parse_report(first);
  const auto& result = report["result"];
  CHECK(result["samples"] == 2000);
  CHECK(result["seed"] == 77);
  CHECK(result["input_z"]["re"].get<double>() == 1.0);
  CHECK(result["input_z"]["im"].get<double>() == 0.0);
  const double f2 = result["f2"].get<double>();
  const double se2 = result["stderr2"].get<double>();
  CHECK(f2 > 0.0);
  CHECK(f2 < 1.0);
  CHECK(se2 > 0.0);
  CHECK(std::abs(f2 - result["analytic_f2"].get<double>()) < 6.0 * se2);

  // the per-sample fidelity does not depend on the teleported amplitude,
  // so the same seed reproduces the estimates for any z up to rounding
  const auto moved = parse_report(run_cli(base + " --z-re 2 --z-im -1"));
  CHECK(moved["result"]["f2"].get<double>() ==
        doctest::Approx(f2).epsilon(1e-12));
  CHECK(moved["result"]["f3"].get<double>() ==
        doctest::Approx(result["f3"].get<double>()).epsilon(1e-12));
  CHECK(moved["result"]["input_z"]["re"].get<double>() == 2.0);
  CHECK(moved["result"]["input_z"]["im"].get<double>() == -1.0);

  const auto tiny = run_cli(base + " --samples 10");
  CHECK(tiny.status == 2);  // below the documented minimum
}

TEST_CASE("twb emits single-point reports and eta-sweep CSV") {
  const auto report = parse_report(run_cli("twb --n2 0.5 --n3 0.5 --eta 1"));
  const auto& result = report["result"];
  CHECK(result["p0"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(result["zeta12"].get<double>()) < 1e-14);
  CHECK(result["fid"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(result["xi_star"].get<double>() == doctest::Approx(0.5).epsilon(1e-14));

  const auto missing = run_cli("twb --n2 0.5 --n3 0.5");
  CHECK(missing.status == 2);

  const auto sweep =
      run_cli("twb --n2 0.5 --n3 0.5 --eta-from 0 --eta-to 1 --eta-steps 5");
  REQUIRE(sweep.status == 0);
  const auto lines = split_lines(sweep.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "n2,n3,eta,p0,zeta12,fid");
  for (int i = 1; i <= 5; ++i) {
    const auto cells = split_csv_row(lines[i]);
    REQUIRE(cells.size() == 6);
    const double eta = cells[2];
    CHECK(eta == doctest::Approx(0.25 * (i - 1)).epsilon(1e-14));
    const auto row = conditional::twb_report(0.5, 0.5, eta, std::nullopt);
    CHECK(cells[3] == doctest::Approx(row.p0).epsilon(1e-14));
    CHECK(cells[4] == doctest::Approx(row.zeta12).epsilon(1e-14));
    CHECK(cells[5] == doctest::Approx(row.fid).epsilon(1e-14));
  }
}

TEST_CASE("classical-sweep produces the documented CSV and JSON forms") {
  const auto csv = run_cli("classical-sweep --from 0 --to 0.1 --steps 50");
  REQUIRE(csv.status == 0);
  const auto lines = split_lines(csv.out);
  REQUIRE(lines.size() == 51);  // header + 50 rows
  CHECK(lines[0] == "e5_joules,e2_joules");
  const auto first = split_csv_row(lines[1]);
  CHECK(first[0] == 0.0);
  CHECK(first[1] == 0.0);
  const auto last = split_csv_row(lines[50]);
  CHECK(last[0] == 0.1);
  CHECK(last[1] ==
        doctest::Approx(classical::output_energy(0.1)).epsilon(1e-14));
  for (std::size_t i = 2; i < lines.size(); ++i)
    CHECK(split_csv_row(lines[i])[1] > split_csv_row(lines[i - 1])[1]);

  // millijoule inputs land on the same physical grid
  const auto mj = run_cli("classical-sweep --from 0 --to 100 --steps 50 --mj");
  REQUIRE(mj.status == 0);
  const auto mj_lines = split_lines(mj.out);
  REQUIRE(mj_lines.size() == 51);
  for (std::size_t i = 1; i < mj_lines.size(); ++i) {
    const auto a = split_csv_row(lines[i]);
    const auto b = split_csv_row(mj_lines[i]);
    CHECK(b[0] == doctest::Approx(a[0]).epsilon(1e-12));
    CHECK(b[1] == doctest::Approx(a[1]).epsilon(1e-12));
  }

  const auto as_json = parse_report(
      run_cli("classical-sweep --from 0 --to 0.1 --steps 50 --format json"));
  const auto& rows = as_json["result"]["rows"];
  REQUIRE(rows.size() == 50);
  CHECK(rows[0]["e5_joules"].get<double>() == 0.0);
  CHECK(rows[49]["e5_joules"].get<double>() == 0.1);
  CHECK(rows[49]["e2_joules"].get<double>() ==
        doctest::Approx(classical::output_energy(0.1)).epsilon(1e-14));
}

TEST_CASE("classical-compare scores a measured file against the model") {
  const TempDir dir;
  const auto rows = classical::sweep({0.0, 0.02, 0.05, 0.08}, {});
  const std::string good = (dir.path / "good.csv").string();
  {
    std::ofstream out(good);
    out << "e5_joules,e2_joules\n";
    char buf[96];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.e5, r.e2);
      out << buf;
    }
  }
  const auto report =
      parse_report(run_cli("classical-compare --data \"" + good + "\""));
  CHECK(report["result"]["count"] == 4);
  CHECK(report["result"]["max_abs_residual"].get<double>() == 0.0);
  CHECK(report["result"]["rms_residual"].get<double>() == 0.0);
  CHECK(report["result"]["rows"][2]["predicted"].get<double>() ==
        doctest::Approx(classical::output_energy(0.05)).epsilon(1e-14));

  const std::string bad = (dir.path / "bad.csv").string();
  {
    std::ofstream out(bad);
    out << "e5_joules,e2_joules\n0.01,1e-5\nnonsense,2e-5\n";
  }
  const auto failure = run_cli("classical-compare --data \"" + bad + "\"");
  CHECK(failure.status == 2);
  const auto err = json::parse(failure.out);
  CHECK(err["error"]["type"] == "config");
  CHECK(err["error"]["message"].get<std::string>().find("line 3") !=
        std::string::npos);

  const auto absent = run_cli("classical-compare");
  CHECK(absent.status == 2);
}

TEST_CASE("config files merge with flags, and flags win") {
  const TempDir dir;
  const std::string file = (dir.path / "run.cfg").string();
  {
    std::ofstream out(file);
    out << "# telecloning populations\nn2 = 1.0\nn3 = 0.5\n";
  }
  const auto from_file =
      parse_report(run_cli("teleclone --config \"" + file + "\""));
  CHECK(from_file["result"]["n3"].get<double>() == 0.5);

  const auto overridden =
      parse_report(run_cli("teleclone --config \"" + file + "\" --n3 0.25"));
  CHECK(overridden["result"]["n2"].get<double>() == 1.0);
  CHECK(overridden["result"]["n3"].get<double>() == 0.25);
  CHECK(overridden["result"]["f2"].get<double>() ==
        doctest::Approx(0.8).epsilon(1e-12));

  const auto missing = run_cli("teleclone --config no_such_file.cfg");
  CHECK(missing.status == 2);
  CHECK(json::parse(missing.out)["error"]["type"] == "config");
}

TEST_CASE("the echoed config round-trips through the parser") {
  const TempDir dir;
  setenv("TRIMODE_OUTPUT_DIR", dir.path.c_str(), 1);
  const auto run = run_cli(
      "dynamics --ratio 0.5 --omega-t 1.0 --alpha-re 0.25 "
      "--output report.json");
  unsetenv("TRIMODE_OUTPUT_DIR");
  REQUIRE(run.status == 0);
  CHECK(run.out.empty());  // the report went to the file

  std::ifstream in(dir.path / "report.json");
  REQUIRE(in.good());
  const auto report = json::parse(in);

  std::string text;
  for (const auto& [key, value] : report["config"].items())
    text += key + "=" + value.get<std::string>() + "\n";
  const auto reparsed = cli::parse_config(text);
  CHECK(reparsed.ratio == 0.5);
  CHECK(reparsed.omega_t == 1.0);
  CHECK(reparsed.alpha_re == 0.25);
  CHECK(reparsed.output == std::string("report.json"));

  // canonical form is stable under another round trip
  std::string text2;
  for (const auto& [k, v] : reparsed.to_key_values()) text2 += k + "=" + v + "\n";
  CHECK(cli::parse_config(text2) == reparsed);
}

TEST_CASE("exit codes separate config errors from numerical violations") {
  const auto bad_eta = run_cli("twb --n2 0.5 --n3 0.5 --eta 1.5");
  CHECK(bad_eta.status == 2);
  const auto err = json::parse(bad_eta.out);
  CHECK(err["error"]["type"] == "config");
  REQUIRE(err["error"].contains("issues"));
  bool mentions_eta = false;
  for (const auto& issue : err["error"]["issues"])
    if (issue.get<std::string>().find("eta") != std::string::npos)
      mentions_eta = true;
  CHECK(mentions_eta);

  // a cutoff far below the population scale trips the tail-bound contract
  const auto cfg = dynamics::CouplingConfig::from_reduced(0.9, 1.4);
  REQUIRE_THROWS_AS(fock::build_vacuum_state(cfg, 2), fock::TailBoundError);
  const auto tail = run_cli("state --ratio 0.9 --omega-t 1.4 --cutoff 2");
  CHECK(tail.status == 3);
  const auto terr = json::parse(tail.out);
  CHECK(terr["error"]["type"] == "numerical");
}

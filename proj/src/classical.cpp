#include "trimode/classical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "trimode/numeric.hpp"

namespace trimode::classical {

void ClassicalParams::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(c1) || !positive(c2) || !positive(e1) || !positive(e4) ||
      !positive(z) || !positive(omega_ratio))
    throw std::invalid_argument("classical parameters must all be positive");
}

double output_energy(double e5, const ClassicalParams& p) {
  p.validate();
  if (!(e5 >= 0.0))
    throw std::invalid_argument("pump energy must be non-negative");
  // [1 - cos(sqrt(u) z)]^2 / u^2 with u = c2 e5 - c1 e4 equals
  // [z^2 versine(u z^2)]^2, which the shared kernel evaluates smoothly
  // through u <= 0.
  const double u = p.c2 * e5 - p.c1 * p.e4;
  const double vz = p.z * p.z * num::phase_versine(u * p.z * p.z);
  return p.omega_ratio * p.c1 * p.e4 * p.c2 * e5 * vz * vz * p.e1;
}

double branch_point(const ClassicalParams& p) {
  p.validate();
  return p.c1 * p.e4 / p.c2;
}

std::vector<SweepRow> sweep(const std::vector<double>& e5_grid,
                            const ClassicalParams& p) {
  if (!std::is_sorted(e5_grid.begin(), e5_grid.end()))
    throw std::invalid_argument("pump-energy grid must be sorted");
  std::vector<SweepRow> rows;
  rows.reserve(e5_grid.size());
  for (double e5 : e5_grid) rows.push_back({e5, output_energy(e5, p)});
  return rows;
}

ComparisonReport compare_measurements(const std::string& path,
                                      const ClassicalParams& p) {
  p.validate();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path);

  ComparisonReport report;
  std::string line;
  int line_no = 0;
  int col_e5 = -1, col_e2 = -1;
  double sq_sum = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      cells.push_back(cell);
    }
    if (col_e5 < 0) {
      // first content line is the header
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "e5_joules") col_e5 = static_cast<int>(i);
        if (cells[i] == "e2_joules") col_e2 = static_cast<int>(i);
      }
      if (col_e5 < 0 || col_e2 < 0)
        throw std::runtime_error(
            path + ": line " + std::to_string(line_no) +
            ": header must name columns e5_joules and e2_joules");
      continue;
    }
    const std::size_t needed =
        static_cast<std::size_t>(std::max(col_e5, col_e2)) + 1;
    if (cells.size() < needed)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected " + std::to_string(needed) +
                               " columns, got " + std::to_string(cells.size()));
    const auto parse = [&](const std::string& text,
                           const char* name) -> double {
      try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": cannot parse " + name + " value '" + text +
                                 "'");
      }
    };
    ComparisonRow entry;
    entry.e5 = parse(cells[col_e5], "e5_joules");
    entry.measured = parse(cells[col_e2], "e2_joules");
    entry.predicted = output_energy(entry.e5, p);
    entry.residual = entry.measured - entry.predicted;
    report.max_abs_residual =
        std::max(report.max_abs_residual, std::abs(entry.residual));
    sq_sum += entry.residual * entry.residual;
    report.rows.push_back(entry);
  }
  if (col_e5 < 0)
    throw std::runtime_error(path + ": no header line found");
  if (!report.rows.empty())
    report.rms_residual = std::sqrt(sq_sum / report.rows.size());
  return report;
}

}  // namespace trimode::classical

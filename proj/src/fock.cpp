#include "trimode/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>

namespace trimode::fock {

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log(sum exp(v)) over a list of log-terms.
double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

std::size_t dense_index(int d, int n1, int n2, int n3) {
  return (static_cast<std::size_t>(n1) * d + n2) * d + n3;
}

double norm_sq_of(const std::vector<Complex>& amps) {
  double acc = 0.0;
  for (const Complex& a : amps) acc += std::norm(a);
  return acc;
}

// a_mode |psi> on the dense tensor (amplitudes sqrt(n) psi(n) shifted down).
std::vector<Complex> lower(const std::vector<Complex>& psi, int d, int mode) {
  std::vector<Complex> out(psi.size(), Complex{});
  std::array<int, 3> n{};
  for (n[0] = 0; n[0] < d; ++n[0])
    for (n[1] = 0; n[1] < d; ++n[1])
      for (n[2] = 0; n[2] < d; ++n[2]) {
        if (n[mode] == 0) continue;
        auto m = n;
        m[mode] -= 1;
        out[dense_index(d, m[0], m[1], m[2])] =
            std::sqrt(static_cast<double>(n[mode])) *
            psi[dense_index(d, n[0], n[1], n[2])];
      }
  return out;
}

Complex inner(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  Complex acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

void check_cutoff(int cutoff) {
  if (cutoff < 0 || cutoff > 128)
    throw std::invalid_argument("cutoff must lie in [0, 128]");
}

}  // namespace

TriFockState::TriFockState(int cutoff, Layout layout, std::vector<Complex> amps,
                           double tail_bound)
    : cutoff_(cutoff),
      layout_(layout),
      amps_(std::move(amps)),
      tail_bound_(tail_bound) {
  const std::size_t d = static_cast<std::size_t>(cutoff) + 1;
  const std::size_t expected = layout == Layout::kPairSheet ? d * d : d * d * d;
  if (amps_.size() != expected)
    throw std::invalid_argument("state amplitude buffer has the wrong size");
}

Complex TriFockState::amplitude(int n1, int n2, int n3) const {
  if (n1 < 0 || n2 < 0 || n3 < 0 || n1 > cutoff_ || n2 > cutoff_ ||
      n3 > cutoff_)
    return Complex{};
  const int d = cutoff_ + 1;
  if (layout_ == Layout::kPairSheet)
    return n1 == n2 + n3 ? amps_[static_cast<std::size_t>(n2) * d + n3]
                         : Complex{};
  return amps_[dense_index(d, n1, n2, n3)];
}

double TriFockState::norm_sq() const { return norm_sq_of(amps_); }

std::vector<Complex> TriFockState::dense() const {
  const int d = cutoff_ + 1;
  if (layout_ == Layout::kDense) return amps_;
  std::vector<Complex> out(static_cast<std::size_t>(d) * d * d, Complex{});
  for (int p = 0; p < d; ++p)
    for (int q = 0; q + p < d; ++q)
      out[dense_index(d, p + q, p, q)] = amps_[static_cast<std::size_t>(p) * d + q];
  return out;
}

int default_cutoff(double n1, double mu_max) {
  int cutoff = 8;
  if (n1 > 0.0) {
    const double s = n1 / (1.0 + n1);
    // smallest c with s^(c+1) < 1e-6
    const int geom = static_cast<int>(std::ceil(std::log(1e-6) / std::log(s)));
    cutoff = std::max(cutoff, geom);
  }
  if (mu_max > 0.0)
    cutoff += static_cast<int>(std::ceil(mu_max + 6.0 * std::sqrt(mu_max + 1.0)));
  return std::min(cutoff, 128);
}

double truncation_tail(double n_thermal, double dsq, int cutoff) {
  if (dsq <= 0.0) {
    if (n_thermal <= 0.0) return 0.0;
    const double s = n_thermal / (1.0 + n_thermal);
    return std::pow(s, cutoff + 1);
  }
  // Displaced-thermal photon-number distribution, evaluated in log space:
  // p_n = s^n/(1+N) e^{-dsq/(1+N)} sum_k C(n,k) y^k / k!,
  // y = dsq/(N (1+N)); the N -> 0 limit is the Poisson law of |d|^2.
  double mass = 0.0;
  if (n_thermal < 1e-12) {
    for (int n = 0; n <= cutoff; ++n)
      mass += std::exp(-dsq + n * std::log(dsq) - std::lgamma(n + 1.0));
  } else {
    const double s = n_thermal / (1.0 + n_thermal);
    const double log_y = std::log(dsq / (n_thermal * (1.0 + n_thermal)));
    const double base = -dsq / (1.0 + n_thermal) - std::log1p(n_thermal);
    std::vector<double> terms;
    for (int n = 0; n <= cutoff; ++n) {
      terms.clear();
      for (int k = 0; k <= n; ++k)
        terms.push_back(log_binomial(n, k) + k * log_y - std::lgamma(k + 1.0));
      mass += std::exp(base + n * std::log(s) + log_sum_exp(terms));
    }
  }
  return std::max(0.0, 1.0 - mass);
}

TriFockState build_vacuum_state(const dynamics::CouplingConfig& cfg, int cutoff,
                                double max_tail) {
  cfg.validate();
  const auto pops = dynamics::mode_populations(cfg);
  if (cutoff < 0) cutoff = default_cutoff(pops.n1);
  check_cutoff(cutoff);
  const double tail = truncation_tail(pops.n1, 0.0, cutoff);
  if (tail > max_tail) throw TailBoundError(tail, max_tail);

  const auto mc = dynamics::heisenberg_coefficients(cfg);
  const double root = std::sqrt(1.0 + pops.n1);
  // Pair-creation amplitudes of the (1,2) and (1,3) links; their moduli are
  // sqrt(n2/(1+n1)) and sqrt(n3/(1+n1)).
  const Complex beta2 = mc.g[0] / root;
  const Complex beta1 = mc.h[0] / root;

  const int d = cutoff + 1;
  std::vector<Complex> amps(static_cast<std::size_t>(d) * d, Complex{});
  Complex pow2{1.0, 0.0};
  for (int p = 0; p < d; ++p) {
    Complex pw{1.0, 0.0};
    for (int q = 0; q + p < d; ++q) {
      const double binom = std::exp(0.5 * log_binomial(p + q, p));
      amps[static_cast<std::size_t>(p) * d + q] = binom * pow2 * pw / root;
      pw *= beta1;
    }
    pow2 *= beta2;
  }
  return TriFockState(cutoff, TriFockState::Layout::kPairSheet,
                      std::move(amps), tail);
}

std::array<Complex, 3> seed_displacements(const dynamics::CouplingConfig& cfg,
                                          Complex alpha) {
  const auto back = dynamics::heisenberg_coefficients_at(cfg, -cfg.time);
  return {alpha * back.f[0], -std::conj(alpha * back.f[1]),
          -std::conj(alpha * back.f[2])};
}

TriFockState build_seeded_state(const dynamics::CouplingConfig& cfg,
                                Complex alpha, int cutoff, double max_tail) {
  cfg.validate();
  const auto pops = dynamics::mode_populations(cfg);
  const auto d_amps = seed_displacements(cfg, alpha);
  const double mu = std::max({std::norm(d_amps[0]), std::norm(d_amps[1]),
                              std::norm(d_amps[2])});
  if (cutoff < 0) cutoff = default_cutoff(pops.n1, mu);
  check_cutoff(cutoff);
  const double tail = truncation_tail(pops.n1, std::norm(d_amps[0]), cutoff);
  if (tail > max_tail) throw TailBoundError(tail, max_tail);

  const auto mc = dynamics::heisenberg_coefficients(cfg);
  const double root = std::sqrt(1.0 + pops.n1);
  const Complex beta2 = mc.g[0] / root;
  const Complex beta1 = mc.h[0] / root;
  const Complex seeded = alpha / root;
  const double gauss = std::exp(-0.5 * std::norm(alpha));

  const int d = cutoff + 1;
  std::vector<Complex> amps(static_cast<std::size_t>(d) * d * d, Complex{});
  // amplitude of |n+p+q, p, q>:
  //   e^{-|a|^2/2} (1+n1)^{-1/2} beta1^q beta2^p (a/sqrt(1+n1))^n
  //     sqrt((n+p+q)!) / (n! sqrt(p! q!))
  Complex pow_n{1.0, 0.0};
  for (int n = 0; n < d; ++n) {
    Complex pow_p{1.0, 0.0};
    for (int p = 0; n + p < d; ++p) {
      Complex pow_q{1.0, 0.0};
      for (int q = 0; n + p + q < d; ++q) {
        const double lg = 0.5 * std::lgamma(n + p + q + 1.0) -
                          std::lgamma(n + 1.0) - 0.5 * std::lgamma(p + 1.0) -
                          0.5 * std::lgamma(q + 1.0);
        amps[dense_index(d, n + p + q, p, q)] =
            gauss / root * pow_n * pow_p * pow_q * std::exp(lg);
        pow_q *= beta1;
      }
      pow_p *= beta2;
    }
    pow_n *= seeded;
  }
  return TriFockState(cutoff, TriFockState::Layout::kDense, std::move(amps),
                      tail);
}

StateMoments moments(const TriFockState& state) {
  const int d = state.cutoff() + 1;
  const auto psi = state.dense();
  const double ns = norm_sq_of(psi);
  if (ns <= 0.0) throw std::invalid_argument("moments of a null state");

  std::array<std::vector<Complex>, 3> phi;
  for (int j = 0; j < 3; ++j) phi[j] = lower(psi, d, j);

  std::array<Complex, 3> mean{};
  Eigen::Matrix3cd nmat, amat;
  for (int i = 0; i < 3; ++i) {
    mean[i] = inner(psi, phi[i]) / ns;
    for (int j = 0; j < 3; ++j) nmat(i, j) = inner(phi[i], phi[j]) / ns;
  }
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i <= j; ++i) {
      amat(i, j) = inner(psi, lower(phi[j], d, i)) / ns;
      amat(j, i) = amat(i, j);  // a_i a_j commute across modes
    }
  }

  StateMoments out;
  out.populations = {nmat(0, 0).real(), nmat(1, 1).real(), nmat(2, 2).real()};
  // Quadratures X = a + a^dag, P = i(a^dag - a):
  //   <X_i X_j>_sym = 2 Re A_ij + 2 Re N_ij + delta_ij
  //   <P_i P_j>_sym = -2 Re A_ij + 2 Re N_ij + delta_ij
  //   <X_i P_j>_sym = 2 Im A_ij + 2 Im N_ij
  // minus the products of the means.
  Eigen::Matrix<double, 6, 1> avg;
  for (int j = 0; j < 3; ++j) {
    avg(j) = 2.0 * mean[j].real();
    avg(3 + j) = 2.0 * mean[j].imag();
  }
  gaussian::Matrix6 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      c(i, j) = 2.0 * amat(i, j).real() + 2.0 * nmat(i, j).real() + delta -
                avg(i) * avg(j);
      c(3 + i, 3 + j) = -2.0 * amat(i, j).real() + 2.0 * nmat(i, j).real() +
                        delta - avg(3 + i) * avg(3 + j);
      c(i, 3 + j) = 2.0 * amat(i, j).imag() + 2.0 * nmat(i, j).imag() -
                    avg(i) * avg(3 + j);
      c(3 + j, i) = c(i, 3 + j);
    }
  out.covariance.m = c;
  out.means = mean;
  return out;
}

DensityMatrix reduce(const TriFockState& state, const std::vector<int>& keep) {
  if (keep.empty() || keep.size() > 2)
    throw std::invalid_argument("reduce: keep one or two modes");
  for (int m : keep)
    if (m < 1 || m > 3)
      throw std::invalid_argument("reduce: mode labels are 1, 2, 3");
  if (keep.size() == 2 && keep[0] == keep[1])
    throw std::invalid_argument("reduce: duplicate mode label");

  const int d = state.cutoff() + 1;
  const auto psi = state.dense();
  const double ns = norm_sq_of(psi);

  std::vector<int> kept;  // 0-based positions
  for (int m : keep) kept.push_back(m - 1);
  std::vector<int> traced;
  for (int m = 0; m < 3; ++m)
    if (std::find(kept.begin(), kept.end(), m) == kept.end())
      traced.push_back(m);

  const int k = static_cast<int>(kept.size());
  const int rows = k == 1 ? d : d * d;
  DensityMatrix out;
  out.modes = keep;
  out.dim = d;
  out.rho = Eigen::MatrixXcd::Zero(rows, rows);

  std::array<int, 3> na{}, nb{};
  const auto compose = [&](const std::array<int, 3>& n) {
    return dense_index(d, n[0], n[1], n[2]);
  };
  std::vector<int> a(k), b(k), t(traced.size());
  const auto recurse_traced = [&](auto&& self, std::size_t ti) -> void {
    if (ti == traced.size()) {
      for (int i = 0; i < k; ++i) {
        na[kept[i]] = a[i];
        nb[kept[i]] = b[i];
      }
      for (std::size_t i = 0; i < traced.size(); ++i) {
        na[traced[i]] = t[i];
        nb[traced[i]] = t[i];
      }
      const int row = k == 1 ? a[0] : a[0] * d + a[1];
      const int col = k == 1 ? b[0] : b[0] * d + b[1];
      out.rho(row, col) += psi[compose(na)] * std::conj(psi[compose(nb)]);
      return;
    }
    for (t[ti] = 0; t[ti] < d; ++t[ti]) self(self, ti + 1);
  };
  const auto recurse_kept = [&](auto&& self, int ki, std::vector<int>& idx,
                                auto&& next) -> void {
    if (ki == k) {
      next();
      return;
    }
    for (idx[ki] = 0; idx[ki] < d; ++idx[ki]) self(self, ki + 1, idx, next);
  };
  recurse_kept(recurse_kept, 0, a, [&] {
    recurse_kept(recurse_kept, 0, b, [&] { recurse_traced(recurse_traced, 0); });
  });
  out.rho /= ns;
  return out;
}

Eigen::MatrixXcd displacement_matrix(Complex alpha, int dim) {
  if (dim < 1) throw std::invalid_argument("displacement_matrix: dim >= 1");
  const double x = std::norm(alpha);
  const double pref = std::exp(-0.5 * x);
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
  // <n+k|D|n> = sqrt(n!/(n+k)!) alpha^k e^{-x/2} L_n^{(k)}(x) along each
  // diagonal k, with the lower triangle from (-conj(alpha))^k and the same
  // Laguerre values.
  Complex up{1.0, 0.0}, down{1.0, 0.0};
  for (int k = 0; k < dim; ++k) {
    double lprev = 0.0, lcur = 1.0;  // L_{-1} = 0, L_0 = 1
    for (int n = 0; n + k < dim; ++n) {
      const double scale =
          std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + k + 1.0)));
      mat(n + k, n) = scale * pref * lcur * up;
      mat(n, n + k) = scale * pref * lcur * down;
      const double lnext =
          ((2.0 * n + 1.0 + k - x) * lcur - (n + k) * lprev) / (n + 1.0);
      lprev = lcur;
      lcur = lnext;
    }
    up *= alpha;
    down *= -std::conj(alpha);
  }
  return mat;
}

TriFockState displaced(const TriFockState& state,
                       const std::array<Complex, 3>& amps) {
  const int d = state.cutoff() + 1;
  std::vector<Complex> cur = state.dense();
  std::vector<Complex> next(cur.size());
  for (int mode = 0; mode < 3; ++mode) {
    const auto dm = displacement_matrix(amps[mode], d);
    std::fill(next.begin(), next.end(), Complex{});
    std::array<int, 3> n{};
    for (n[0] = 0; n[0] < d; ++n[0])
      for (n[1] = 0; n[1] < d; ++n[1])
        for (n[2] = 0; n[2] < d; ++n[2]) {
          const Complex value = cur[dense_index(d, n[0], n[1], n[2])];
          if (value == Complex{}) continue;
          auto m = n;
          for (int row = 0; row < d; ++row) {
            m[mode] = row;
            next[dense_index(d, m[0], m[1], m[2])] += dm(row, n[mode]) * value;
          }
        }
    std::swap(cur, next);
  }
  return TriFockState(state.cutoff(), TriFockState::Layout::kDense,
                      std::move(cur), state.tail_bound());
}

void write_binary(const TriFockState& state, const std::string& path) {
  static_assert(std::endian::native == std::endian::little,
                "amplitude dump assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::uint32_t header[2] = {static_cast<std::uint32_t>(state.cutoff()),
                                   3u};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  const auto amps = state.dense();
  out.write(reinterpret_cast<const char*>(amps.data()),
            static_cast<std::streamsize>(amps.size() * sizeof(Complex)));
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace trimode::fock

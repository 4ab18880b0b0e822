#include "asymrate/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asymrate/reference_states.hpp"
#include "asymrate/sequences.hpp"
#include "asymrate/skew.hpp"

namespace asym {

namespace {

struct Rational {
  long long num = 0;
  long long den = 1;
};

// continued-fraction convergents until the approximation error is negligible
Rational snap_to_rational(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("iid_family: R must be positive");
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = r;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(x);
    long long a = static_cast<long long>(fl);
    long long h2 = a * h1 + h0;
    long long k2 = a * k1 + k0;
    if (k2 > 10000000LL) break;
    h0 = h1; h1 = h2;
    k0 = k1; k1 = k2;
    double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(approx - r) <= 1e-9 * std::max(1.0, r)) return {h1, k1};
    double frac = x - fl;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  throw std::invalid_argument("iid_family: R is not close to a small rational");
}

long long copies_for(const Rational& r, int m) {
  return (r.num * m + r.den - 1) / r.den;  // exact ceil(R m)
}

int max_tensor_power(int d) {
  if (d < 2) return kDefaultDimCap >= d ? 4096 : 0;
  long long acc = 1;
  int k = 0;
  while (acc * d <= kDefaultDimCap) {
    acc *= d;
    ++k;
  }
  return k;
}

std::pair<DensityMatrix, HermitianOperator> ladder_pair(const std::vector<double>& weights,
                                                        long long level0) {
  std::vector<long long> levels;
  std::vector<double> amps;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double w = std::max(weights[i], 0.0);
    if (w < 1e-30) continue;
    levels.push_back(level0 + static_cast<long long>(i));
    amps.push_back(std::sqrt(w));
  }
  if (levels.empty()) throw std::invalid_argument("ladder_pair: empty distribution");
  int n = static_cast<int>(levels.size());
  Vec psi(n);
  Mat h = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    psi(i) = amps[static_cast<std::size_t>(i)];
    h(i, i) = static_cast<double>(levels[static_cast<std::size_t>(i)]);
  }
  psi /= psi.norm();
  return {DensityMatrix::pure(psi), HermitianOperator(h)};
}

std::vector<double> binomial_half(int m) {
  std::vector<double> b(static_cast<std::size_t>(m) + 1);
  b[0] = std::pow(0.5, m);
  for (int j = 0; j < m; ++j)
    b[static_cast<std::size_t>(j) + 1] =
        b[static_cast<std::size_t>(j)] * static_cast<double>(m - j) / (j + 1);
  return b;
}

}  // namespace

StateFamily iid_family(const Vec& psi, const HermitianOperator& h, double R) {
  if (std::abs(psi.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("iid_family: state is not normalized");
  Rational rat = snap_to_rational(R);
  NormalizedPeriod np = normalize_period(psi, h);
  HermitianOperator h1 = np.h;
  Vec psi1 = psi;
  int d = static_cast<int>(psi.size());
  int kmax = max_tensor_power(d);
  long long mcap = (rat.den * kmax) / rat.num;
  if (mcap < 1)
    throw std::invalid_argument("iid_family: one element already exceeds the dimension cap");

  EnergyDistribution p1 = energy_distribution(psi1, h1);

  StateFamily fam;
  fam.label = "iid(R=" + std::to_string(R) + ")";
  fam.m_cap = static_cast<int>(std::min<long long>(mcap, 1000000));
  fam.generator = [psi1, h1, rat, d](int m) {
    if (m < 1) throw std::invalid_argument("iid_family: m must be >= 1");
    long long k = copies_for(rat, m);
    long long dim = 1;
    for (long long i = 0; i < k; ++i) {
      dim *= d;
      if (dim > kDefaultDimCap) throw dim_error("iid_family: dimension cap exceeded");
    }
    Vec acc = psi1;
    for (long long i = 1; i < k; ++i) acc = tensor(acc, psi1);
    return std::make_pair(DensityMatrix::pure(acc), iid_hamiltonian(h1, static_cast<int>(k)));
  };
  fam.reduced = [p1, rat](int m) {
    if (m < 1) throw std::invalid_argument("iid_family: m must be >= 1");
    long long k = copies_for(rat, m);
    IntSequence pk = p1;
    for (long long i = 1; i < k; ++i) pk = convolve(pk, p1);
    return ladder_pair(pk.values, pk.offset);
  };
  return fam;
}

std::pair<DensityMatrix, HermitianOperator> noniid_ladder(int m) {
  if (m < 1) throw std::invalid_argument("noniid_ladder: m must be >= 1");
  if (m + 2 > kDefaultDimCap) throw dim_error("noniid_ladder: dimension cap exceeded");
  double eps = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> w(static_cast<std::size_t>(2 * m) + 1, 0.0);
  std::vector<double> b = binomial_half(m);
  for (int j = 0; j <= m; ++j) w[static_cast<std::size_t>(j)] = (1.0 - eps) * b[static_cast<std::size_t>(j)];
  w[static_cast<std::size_t>(2 * m)] += eps;
  return ladder_pair(w, 0);
}

StateFamily noniid_example_family() {
  StateFamily fam;
  fam.label = "noniid_example";
  fam.m_cap = max_tensor_power(3);
  fam.generator = [](int m) {
    if (m < 1) throw std::invalid_argument("noniid_example_family: m must be >= 1");
    long long dim = 1;
    for (int i = 0; i < m; ++i) {
      dim *= 3;
      if (dim > kDefaultDimCap) throw dim_error("noniid_example_family: dimension cap exceeded");
    }
    double eps = 1.0 / std::sqrt(static_cast<double>(m));
    Vec phi3 = Vec::Zero(3);
    phi3(0) = 1.0 / std::sqrt(2.0);
    phi3(1) = 1.0 / std::sqrt(2.0);
    Vec acc = phi3;
    for (int i = 1; i < m; ++i) acc = tensor(acc, phi3);
    Vec psi = std::sqrt(1.0 - eps) * acc;
    psi(psi.size() - 1) += std::sqrt(eps);  // |2...2> carries all weight at energy 2m
    Mat h1 = Mat::Zero(3, 3);
    h1(1, 1) = 1.0;
    h1(2, 2) = 2.0;
    return std::make_pair(DensityMatrix::pure(psi), iid_hamiltonian(HermitianOperator(h1), m));
  };
  fam.reduced = [](int m) { return noniid_ladder(m); };
  return fam;
}

NoniidRow noniid_row(int m) {
  if (m < 1) throw std::invalid_argument("noniid_row: m must be >= 1");
  double eps = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> b = binomial_half(m);
  double m1 = 0.0, m2 = 0.0;
  for (int j = 0; j <= m; ++j) {
    double w = (1.0 - eps) * b[static_cast<std::size_t>(j)];
    m1 += w * j;
    m2 += w * static_cast<double>(j) * j;
  }
  m1 += eps * 2.0 * m;
  m2 += eps * 4.0 * static_cast<double>(m) * m;
  NoniidRow row;
  row.m = m;
  row.variance = m2 - m1 * m1;
  double s = std::sqrt(static_cast<double>(m));
  row.formula = (s / 4.0) * (9.0 * m - 8.0 * s - 1.0);
  row.diff = std::abs(row.variance - row.formula);
  // overlap with phi_coh^{x m} in the shared ladder basis
  double ip = 0.0;
  for (int j = 0; j <= m; ++j)
    ip += std::sqrt((1.0 - eps) * b[static_cast<std::size_t>(j)]) *
          std::sqrt(b[static_cast<std::size_t>(j)]);
  row.distance = std::sqrt(std::max(0.0, 1.0 - ip * ip));
  return row;
}

RateReport estimate_rates(const StateFamily& family, const MonotoneFunction& f,
                          const std::vector<int>& m_grid, const std::vector<double>& eps_grid,
                          const OptimizerOptions& opts) {
  if (m_grid.empty()) throw std::invalid_argument("estimate_rates: empty m grid");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (m_grid[i] < 1 || m_grid[i] > family.m_cap)
      throw std::invalid_argument("estimate_rates: m outside [1, m_cap]");
    if (i > 0 && m_grid[i] <= m_grid[i - 1])
      throw std::invalid_argument("estimate_rates: m grid must be strictly increasing");
  }
  if (eps_grid.empty()) throw std::invalid_argument("estimate_rates: empty eps grid");
  for (std::size_t j = 0; j < eps_grid.size(); ++j) {
    if (eps_grid[j] <= 0.0 || eps_grid[j] >= 1.0)
      throw std::invalid_argument("estimate_rates: eps must lie in (0,1)");
    if (j > 0 && eps_grid[j] >= eps_grid[j - 1])
      throw std::invalid_argument("estimate_rates: eps grid must be strictly decreasing");
  }

  RateReport rep;
  rep.label = family.label;
  rep.f_tag = f.tag;
  rep.m_grid = m_grid;
  rep.eps_grid = eps_grid;
  rep.values.assign(m_grid.size(), std::vector<double>(eps_grid.size(), 0.0));
  rep.converged.assign(m_grid.size(), std::vector<bool>(eps_grid.size(), true));

  int stale_cells = 0;
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    auto pair = family.reduced ? family.reduced(m_grid[i]) : family.generator(m_grid[i]);
    for (std::size_t j = 0; j < eps_grid.size(); ++j) {
      OptimizerOptions cell = opts;
      cell.seed = opts.seed + 10007 * static_cast<std::uint64_t>(i) + 101 * static_cast<std::uint64_t>(j);
      SmoothingResult res = smooth_skew_info(pair.first, pair.second, f, eps_grid[j], cell);
      rep.values[i][j] = res.value / m_grid[i];
      rep.converged[i][j] = res.converged;
      if (!res.converged) ++stale_cells;
    }
    // a ball for larger eps contains the smaller ball, so the smaller-eps
    // estimate is also a valid upper bound for the larger-eps cell
    for (std::size_t j = eps_grid.size(); j-- > 1;)
      rep.values[i][j - 1] = std::min(rep.values[i][j - 1], rep.values[i][j]);
  }

  std::size_t window = std::min<std::size_t>(3, m_grid.size());
  double sup = rep.values[m_grid.size() - window].back();
  double inf = sup;
  for (std::size_t i = m_grid.size() - window; i < m_grid.size(); ++i) {
    sup = std::max(sup, rep.values[i].back());
    inf = std::min(inf, rep.values[i].back());
  }
  rep.sup_estimate = sup;
  rep.inf_estimate = inf;
  rep.caveat =
      "estimates taken over the largest-m window at the smallest eps; the double limit "
      "(m -> infinity, then eps -> 0) is extrapolated, not computed";
  if (stale_cells > 0)
    rep.caveat += "; " + std::to_string(stale_cells) + " cell(s) did not meet the convergence heuristic";
  return rep;
}

double cost_lower_bound(const RateReport& report) { return 4.0 * report.sup_estimate; }

double dist_upper_bound(const RateReport& report) { return 4.0 * report.inf_estimate; }

double iid_dist_upper_bound(const DensityMatrix& rho, const HermitianOperator& h,
                            const MonotoneFunction& f) {
  EigenSystem es = eig_hermitian(h.matrix());
  for (double e : es.eigenvalues)
    if (std::abs(e - std::round(e)) > 1e-9)
      throw std::invalid_argument(
          "iid_dist_upper_bound: spectrum is not integer; normalize the period first");
  return 4.0 * skew_info(rho, h, f).value;
}

}  // namespace asym

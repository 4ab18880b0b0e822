#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "asymrate/monotone.hpp"
#include "asymrate/operators.hpp"
#include "asymrate/smoothing.hpp"

namespace asym {

// A sequence of (state, Hamiltonian) pairs indexed by m.  `generator` builds
// the full tensor-product representation; `reduced`, when set, builds an
// equivalent low-dimensional ladder pair (same energy distribution, pure
// states only) that covariant isometries map onto the original, so smoothed
// values agree exactly.
struct StateFamily {
  std::string label;
  int m_cap = 0;
  std::function<std::pair<DensityMatrix, HermitianOperator>(int)> generator;
  std::function<std::pair<DensityMatrix, HermitianOperator>(int)> reduced;
};

struct RateReport {
  std::string label;
  std::string f_tag;
  std::vector<int> m_grid;
  std::vector<double> eps_grid;                 // strictly decreasing
  std::vector<std::vector<double>> values;      // values[i][j] = (1/m_i) I^f_{eps_j}
  std::vector<std::vector<bool>> converged;
  double sup_estimate = 0.0;
  double inf_estimate = 0.0;
  std::string caveat;
};

// Family m -> (psi^{x ceil(R m)}, H_iid).  The single-copy pair is
// period-normalized up front; R is snapped to a rational a/b so the ceiling
// is exact.  m_cap is the largest m whose tensor power fits the dimension cap.
StateFamily iid_family(const Vec& psi, const HermitianOperator& h, double R);

// Qutrit family sqrt(1-eps_m) phi_coh^{x m} + sqrt(eps_m) |2...2>, eps_m = 1/sqrt(m).
StateFamily noniid_example_family();

// Exact ladder representation of the family above; valid far beyond the
// tensor-product cap since the dimension is m + 2.
std::pair<DensityMatrix, HermitianOperator> noniid_ladder(int m);

struct NoniidRow {
  int m = 0;
  double variance = 0.0;   // Var = unsmoothed skew information (pure state)
  double formula = 0.0;    // (sqrt(m)/4)(9m - 8 sqrt(m) - 1)
  double diff = 0.0;
  double distance = 0.0;   // trace distance to phi_coh^{x m}
};
NoniidRow noniid_row(int m);

RateReport estimate_rates(const StateFamily& family, const MonotoneFunction& f,
                          const std::vector<int>& m_grid, const std::vector<double>& eps_grid,
                          const OptimizerOptions& opts);

double cost_lower_bound(const RateReport& report);   // 4 * sup_estimate
double dist_upper_bound(const RateReport& report);   // 4 * inf_estimate

// Single-copy bound 4 I^f(rho, H); requires an integer spectrum.
double iid_dist_upper_bound(const DensityMatrix& rho, const HermitianOperator& h,
                            const MonotoneFunction& f);

}  // namespace asym

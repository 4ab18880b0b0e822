#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asymrate/monotone.hpp"
#include "asymrate/operators.hpp"

namespace asym {

// Real sequence over a contiguous window of integer indices.  `tail_bound` is
// a certified bound on the total absolute mass outside the stored window
// (0 for exactly finite sequences, +inf when no certificate is available).
struct IntSequence {
  long long offset = 0;
  std::vector<double> values;
  double tail_bound = 0.0;

  long long first_index() const { return offset; }
  long long last_index() const { return offset + static_cast<long long>(values.size()) - 1; }
  double at(long long n) const {
    long long i = n - offset;
    if (i < 0 || i >= static_cast<long long>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(i)];
  }
};

using EnergyDistribution = IntSequence;

double sequence_sum(const IntSequence& s);
double sequence_abs_sum(const IntSequence& s);
double sequence_mean(const IntSequence& s);
double sequence_variance(const IntSequence& s);

// Throws unless entries >= -1e-12 and the total is 1 within 1e-9 + tail_bound.
void validate_distribution(const IntSequence& p, const std::string& what);

// P_lambda(n) = e^{-lambda} lambda^n / n! on [0, n_max].  lambda < 0 gives the
// signed generalized version.  The tail bound comes from a geometric ratio
// estimate and is +inf when n_max is too small for the ratio to contract.
IntSequence poisson(double lambda, int n_max);

// Grows n_max until the certified tail drops below `tail_tol`.
IntSequence poisson_certified(double lambda, double tail_tol = 1e-10);

IntSequence convolve(const IntSequence& a, const IntSequence& b);
IntSequence shift(const IntSequence& p, long long k);
double total_variation(const IntSequence& p, const IntSequence& q);

// Convolution inverse: (q * inverse)(n) = delta_{n,0} on the stored range.
// The inverse of a truncated sequence carries no tail certificate.
IntSequence inverse_sequence(const IntSequence& q, int n_max);

// Spectral weight of a pure state on the integer eigenspaces of h.
EnergyDistribution energy_distribution(const Vec& psi, const HermitianOperator& h);
EnergyDistribution energy_distribution(const DensityMatrix& psi, const HermitianOperator& h);

// Rescales and shifts h so the levels carrying weight of psi become integers
// with gap gcd 1 and ground level 0.  The state itself is unchanged.
struct NormalizedPeriod {
  HermitianOperator h;
  double scale = 1.0;   // applied as h_new = (h_old - shift*I) * scale
  double shift = 0.0;
  bool changed = false;
};
NormalizedPeriod normalize_period(const Vec& psi, const HermitianOperator& h);

struct FmaxResult {
  double value = 0.0;
  bool infinite = false;  // no feasible lambda up to the cap
};

// F_max = inf{4 lambda : P_lambda * p_inverse >= 0},
// F_min = sup{4 lambda : p * P_{-lambda} >= 0}.
// Feasibility on the stored window: entries >= -1e-9 and the window total
// within 1e-9 of 1.  lambda_cap <= 0 selects 64*max(1, Var(p)).
FmaxResult f_max(const EnergyDistribution& p, double lambda_cap = -1.0, double tol = 1e-6);
double f_min(const EnergyDistribution& p, double tol = 1e-6, double lambda_cap = -1.0);

// g(x) = Erf(x/sqrt(2)) - (2x/sqrt(2 pi)) e^{-x^2/2}: second moment captured
// by a standard normal truncated to [-x, x].  Strictly increasing, g(0)=0,
// g(x) -> 1.  The inverse bisects on [0, 40].
double truncated_normal_second_moment(double x);
double truncated_normal_second_moment_inverse(double y);

// gamma_lambda(eps) = alpha^2 eps + 2 lambda eps + 4 alpha^2 eps^2 lambda /
// (1 - eps - lambda/alpha^2) with alpha = g^{-1}(1-eps)/sqrt(lambda).
// Throws when 1 - eps - lambda/alpha^2 <= 0, naming the eps threshold.
double gamma_lambda(double lambda, double eps);

struct SmoothingBoundParams {
  double lambda = 0.0;
  double epsilon = 0.0;
  double alpha_eps = 0.0;
  double gamma = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta_f = 0.0;
};

// Aggregates the robustness functions used by the variance lower bounds.
// delta_f = lambda - (lambda - gamma_lambda(delta2)) * (f(0)/f(delta1/(1-delta1)))
// * (1-2 delta1)^2; when gamma_lambda(delta2) is undefined the bound
// degenerates and delta_f = lambda.
SmoothingBoundParams smoothing_bound_params(double lambda, double eps, const MonotoneFunction& f);

struct PoissonShiftFit {
  long long k = 0;
  double tv = 0.0;
};

// Best shift k of P_lambda against p in total variation, searched over
// round(mean(p) - lambda) +- 5.
PoissonShiftFit poisson_shift_fit(const EnergyDistribution& p, double lambda);

struct VarianceBoundReport {
  double variance = 0.0;        // Var(q)
  double target_variance = 0.0; // m * lambda
  double gamma_term = 0.0;      // gamma_lambda(eps) * m
  double bound = 0.0;           // target_variance - gamma_term
  long long best_shift = 0;
  double tv = 0.0;
  bool pass = false;
};

// Checks Var(q) >= m*lambda - gamma_lambda(eps)*m given that q is within eps
// of some shift of P_{m*lambda} in total variation.
VarianceBoundReport verify_variance_bound(const EnergyDistribution& q, double lambda, int m,
                                          double eps);

}  // namespace asym

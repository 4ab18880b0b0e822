#pragma once

#include <string>

#include "asymrate/monotone.hpp"
#include "asymrate/operators.hpp"

namespace asym {

inline constexpr double kDefaultEigFloor = 1e-12;

struct SkewInfoResult {
  double value;
  std::string f_tag;
  double eigenvalue_floor_used;
};

SkewInfoResult skew_info(const DensityMatrix& rho, const HermitianOperator& h,
                         const MonotoneFunction& f, double eig_floor = kDefaultEigFloor);

// fast path used by optimizers: no density-matrix revalidation
double skew_info_raw(const Mat& rho, const Mat& h, const MonotoneFunction& f,
                     double eig_floor = kDefaultEigFloor);

double qfi(const DensityMatrix& rho, const HermitianOperator& h);

// rho = (1-q)|psi1><psi1| + q|psi2><psi2| with <psi1|psi2> = 0
double two_pure_mixture_closed_form(double q, const Vec& psi1, const Vec& psi2,
                                    const HermitianOperator& h, const MonotoneFunction& f);

// small-p limit of 4x the wyd value for the worked qutrit mixture: (9 - 7q)/4
double wyd_p_to_zero_bound(double q);

}  // namespace asym

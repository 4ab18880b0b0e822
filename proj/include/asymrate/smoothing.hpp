#pragma once

#include <cstdint>
#include <vector>

#include "asymrate/monotone.hpp"
#include "asymrate/operators.hpp"
#include "asymrate/skew.hpp"

namespace asym {

struct OptimizerOptions {
  int iterations = 2000;
  int restarts = 5;  // random restarts in addition to the start at rho
  double step_scale = 0.5;
  double fd_step = 1e-5;
  int max_alternations = 200;
  double eig_floor = kDefaultEigFloor;
  std::uint64_t seed = 12345;
};

struct SmoothingResult {
  double value;
  DensityMatrix witness;
  double epsilon;
  int iterations;  // total performed across restarts
  bool converged;
};

// inf of the skew information over the trace-distance eps-ball, by projected subgradient
// descent; the value is an upper bound on the true infimum
SmoothingResult smooth_skew_info(const DensityMatrix& rho, const HermitianOperator& h,
                                 const MonotoneFunction& f, double eps,
                                 const OptimizerOptions& opts = {});

// random-search oracle for dim <= 3; `resolution` = number of samples; extra candidate
// states (must be Hermitian, trace one, PSD) are evaluated too when supplied
double brute_force_smooth(const DensityMatrix& rho, const HermitianOperator& h,
                          const MonotoneFunction& f, double eps, int resolution,
                          std::uint64_t seed = 999,
                          const std::vector<Mat>* extra_candidates = nullptr);

double smooth_qfi(const DensityMatrix& rho, const HermitianOperator& h, double eps,
                  const OptimizerOptions& opts = {});

// feasible-set map used by the optimizer; exposed for tests
Mat project_to_ball(const Mat& sigma, const Mat& rho, double eps, int max_alternations = 200);

}  // namespace asym

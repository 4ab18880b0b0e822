#include "asymrate/skew.hpp"

#include <cmath>
#include <stdexcept>

namespace asym {

double skew_info_raw(const Mat& rho, const Mat& h, const MonotoneFunction& f, double eig_floor) {
  if (!f.regular())
    throw std::invalid_argument("skew_info requires a regular function (f(0) > 0); '" + f.tag +
                                "' has f(0) = 0");
  if (rho.rows() != h.rows()) throw dim_error("skew_info: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  if (es.info() != Eigen::Success) throw std::runtime_error("skew_info: eigensolver failed");
  RVec lam = es.eigenvalues().cwiseMax(0.0);
  Mat ht = es.eigenvectors().adjoint() * h * es.eigenvectors();
  const int n = static_cast<int>(lam.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double li = lam(i), lj = lam(j);
      double diff = li - lj;
      if (std::abs(diff) < 1e-12) continue;
      double lo = std::min(li, lj), hi = std::max(li, lj);
      double denom;
      if (lo >= eig_floor) {
        denom = lj * f.eval(li / lj);
      } else if (hi >= eig_floor) {
        // c_f(x, 0) limit: the denominator tends to x*f(0)
        denom = hi * f.f0;
      } else {
        continue;
      }
      total += diff * diff / denom * std::norm(ht(i, j));
    }
  }
  return 0.5 * f.f0 * total;
}

SkewInfoResult skew_info(const DensityMatrix& rho, const HermitianOperator& h,
                         const MonotoneFunction& f, double eig_floor) {
  double v = skew_info_raw(rho.matrix(), h.matrix(), f, eig_floor);
  return {v, f.tag, eig_floor};
}

double qfi(const DensityMatrix& rho, const HermitianOperator& h) {
  if (rho.dim() != h.dim()) throw dim_error("qfi: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix());
  RVec lam = es.eigenvalues().cwiseMax(0.0);
  Mat ht = es.eigenvectors().adjoint() * h.matrix() * es.eigenvectors();
  const int n = static_cast<int>(lam.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double diff = lam(i) - lam(j);
      double sum = lam(i) + lam(j);
      if (std::abs(diff) < 1e-12 || sum < kDefaultEigFloor) continue;
      total += diff * diff / sum * std::norm(ht(i, j));
    }
  double f_val = 2.0 * total;
  double cross = 4.0 * skew_info(rho, h, make_sld()).value;
  if (std::abs(f_val - cross) > 1e-9)
    throw std::runtime_error("qfi: cross-check against 4x the sld skew information failed");
  return f_val;
}

double two_pure_mixture_closed_form(double q, const Vec& psi1, const Vec& psi2,
                                    const HermitianOperator& h, const MonotoneFunction& f) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("two_pure_mixture_closed_form: q must lie in [0,1]");
  if (psi1.size() != psi2.size() || psi1.size() != h.dim())
    throw dim_error("two_pure_mixture_closed_form: dimension mismatch");
  if (std::abs(psi1.norm() - 1.0) > 1e-9 || std::abs(psi2.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("two_pure_mixture_closed_form: states must be normalized");
  if (std::abs(psi1.dot(psi2)) > 1e-9)
    throw std::invalid_argument("two_pure_mixture_closed_form: states must be orthogonal");
  if (!f.regular())
    throw std::invalid_argument("two_pure_mixture_closed_form requires a regular function");
  double v1 = variance(psi1, h.matrix());
  double v2 = variance(psi2, h.matrix());
  if (q == 0.0) return v1;
  if (q == 1.0) return v2;
  double h12 = std::norm(psi1.dot(h.matrix() * psi2));
  double one_minus_2q = 1.0 - 2.0 * q;
  double coeff = 1.0 - f.f0 * one_minus_2q * one_minus_2q / (q * f.eval((1.0 - q) / q));
  return (1.0 - q) * v1 + q * v2 - coeff * h12;
}

double wyd_p_to_zero_bound(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("wyd_p_to_zero_bound: q must lie in (0,1)");
  return (9.0 - 7.0 * q) / 4.0;
}

}  // namespace asym

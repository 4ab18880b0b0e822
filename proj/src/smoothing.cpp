#include "asymrate/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "asymrate/channels.hpp"

namespace asym {

namespace {

Mat psd_trace_normalize(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (x + x.adjoint()));
  RVec lam = es.eigenvalues().cwiseMax(0.0);
  double s = lam.sum();
  if (s <= 1e-300) return Mat::Identity(x.rows(), x.rows()) / static_cast<double>(x.rows());
  lam /= s;
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

// orthonormal traceless Hermitian basis, dim^2 - 1 directions
std::vector<Mat> traceless_basis(int n) {
  std::vector<Mat> basis;
  basis.reserve(n * n - 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat s = Mat::Zero(n, n);
      s(i, j) = inv_sqrt2;
      s(j, i) = inv_sqrt2;
      basis.push_back(s);
      Mat a = Mat::Zero(n, n);
      a(i, j) = cplx(0.0, -inv_sqrt2);
      a(j, i) = cplx(0.0, inv_sqrt2);
      basis.push_back(a);
    }
  for (int k = 1; k < n; ++k) {
    Mat d = Mat::Zero(n, n);
    double norm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) d(i, i) = norm;
    d(k, k) = -static_cast<double>(k) * norm;
    basis.push_back(d);
  }
  return basis;
}

Mat random_traceless_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  Mat h = 0.5 * (g + g.adjoint());
  h.diagonal().array() -= h.trace() / static_cast<double>(n);
  return h;
}

double objective(const Mat& sigma, const Mat& h, const MonotoneFunction& f, double floor) {
  // gradients near the boundary are noisy; nudge rank-deficient iterates inward
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < 1e-12) {
    int n = static_cast<int>(sigma.rows());
    Mat blended = (1.0 - 1e-9) * sigma + (1e-9 / n) * Mat::Identity(n, n);
    return skew_info_raw(blended, h, f, floor);
  }
  return skew_info_raw(sigma, h, f, floor);
}

}  // namespace

Mat project_to_ball(const Mat& sigma, const Mat& rho, double eps, int max_alternations) {
  Mat s = sigma;
  for (int it = 0; it < max_alternations; ++it) {
    s = psd_trace_normalize(s);
    double d = trace_distance(s, rho);
    if (d <= eps + 1e-12) return s;
    s = rho + (eps / d) * (s - rho);
  }
  return psd_trace_normalize(s);
}

SmoothingResult smooth_skew_info(const DensityMatrix& rho, const HermitianOperator& h,
                                 const MonotoneFunction& f, double eps,
                                 const OptimizerOptions& opts) {
  if (rho.dim() != h.dim()) throw dim_error("smooth_skew_info: dimension mismatch");
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("smooth_skew_info: eps must lie in [0,1]");
  double base = skew_info_raw(rho.matrix(), h.matrix(), f, opts.eig_floor);
  if (eps == 0.0 || base <= 1e-14)
    return {base, rho, eps, 0, true};

  const int n = rho.dim();
  const Mat& r = rho.matrix();
  const Mat& hm = h.matrix();
  std::vector<Mat> basis = traceless_basis(n);
  std::mt19937_64 rng(opts.seed);

  Mat best_witness = r;
  double best_value = base;
  bool best_converged = true;
  int total_iters = 0;

  for (int restart = 0; restart <= opts.restarts; ++restart) {
    Mat sigma;
    if (restart == 0) {
      sigma = r;
    } else {
      Mat g = random_traceless_hermitian(n, rng);
      sigma = project_to_ball(r + (eps / g.norm()) * g, r, eps, opts.max_alternations);
    }
    double run_best = objective(sigma, hm, f, opts.eig_floor);
    Mat run_best_witness = sigma;
    double tail_start_value = run_best;
    bool grad_vanished = false;

    int tail_begin = std::max(1, opts.iterations - opts.iterations / 5);
    for (int k = 1; k <= opts.iterations; ++k) {
      Mat grad = Mat::Zero(n, n);
      for (const Mat& b : basis) {
        Mat plus = project_to_ball(sigma + opts.fd_step * b, r, eps, opts.max_alternations);
        Mat minus = project_to_ball(sigma - opts.fd_step * b, r, eps, opts.max_alternations);
        double slope = (objective(plus, hm, f, opts.eig_floor) -
                        objective(minus, hm, f, opts.eig_floor)) /
                       (2.0 * opts.fd_step);
        grad += slope * b;
      }
      double gn = grad.norm();
      ++total_iters;
      if (gn < 1e-12) {
        grad_vanished = true;
        break;
      }
      double step = opts.step_scale / std::sqrt(static_cast<double>(k));
      sigma = project_to_ball(sigma - (step / gn) * grad, r, eps, opts.max_alternations);
      double val = objective(sigma, hm, f, opts.eig_floor);
      if (val < run_best) {
        run_best = val;
        run_best_witness = sigma;
      }
      if (k == tail_begin) tail_start_value = run_best;
    }
    bool run_converged =
        grad_vanished ||
        (tail_start_value - run_best) <= 1e-5 * std::max(1.0, std::abs(run_best));
    if (run_best < best_value) {
      best_value = run_best;
      best_witness = run_best_witness;
      best_converged = run_converged;
    }
  }

  Mat final_witness = project_to_ball(best_witness, r, eps, opts.max_alternations);
  double final_value = skew_info_raw(final_witness, hm, f, opts.eig_floor);
  if (final_value > best_value + 1e-10) {
    // projection safety net moved the point; keep the consistent pair
    final_value = std::min(final_value, base);
  }
  if (final_value > base) {
    final_witness = r;
    final_value = base;
  }
  return {final_value, DensityMatrix(final_witness), eps, total_iters, best_converged};
}

double brute_force_smooth(const DensityMatrix& rho, const HermitianOperator& h,
                          const MonotoneFunction& f, double eps, int resolution,
                          std::uint64_t seed, const std::vector<Mat>* extra_candidates) {
  if (rho.dim() > 3) throw std::invalid_argument("brute_force_smooth: dim must be <= 3");
  if (rho.dim() != h.dim()) throw dim_error("brute_force_smooth: dimension mismatch");
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("brute_force_smooth: eps must lie in [0,1]");
  const Mat& r = rho.matrix();
  const Mat& hm = h.matrix();
  const int n = rho.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  double best = skew_info_raw(r, hm, f, kDefaultEigFloor);

  // the fully dephased state is symmetric; walking toward it is often optimal
  {
    QuantumChannel deph = dephasing_channel(h);
    Mat target = apply(deph, rho).matrix();
    double d = trace_distance(r, target);
    double t = d <= eps ? 1.0 : eps / d;
    Mat cand = (1.0 - t) * r + t * target;
    best = std::min(best, skew_info_raw(cand, hm, f, kDefaultEigFloor));
  }
  if (extra_candidates)
    for (const Mat& c : *extra_candidates)
      if (trace_distance(c, r) <= eps + 1e-8)
        best = std::min(best, skew_info_raw(c, hm, f, kDefaultEigFloor));

  if (n == 2) {
    // Bloch ball: trace distance is half the Euclidean distance
    Mat sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
    sz << 1, 0, 0, -1;
    auto bloch_state = [&](double x, double y, double z) {
      return Mat(0.5 * (Mat::Identity(2, 2) + x * sx + y * sy + z * sz));
    };
    double cx = (r * sx).trace().real();
    double cy = (r * sy).trace().real();
    double cz = (r * sz).trace().real();
    double bx = cx, by = cy, bz = cz;
    auto try_point = [&](double x, double y, double z) {
      double dx = x - cx, dy = y - cy, dz = z - cz;
      if (dx * dx + dy * dy + dz * dz > 4.0 * eps * eps) return;
      if (x * x + y * y + z * z > 1.0) return;
      double v = skew_info_raw(bloch_state(x, y, z), hm, f, kDefaultEigFloor);
      if (v < best) {
        best = v;
        bx = x;
        by = y;
        bz = z;
      }
    };
    for (int s = 0; s < resolution; ++s) {
      double ux = unif(rng), uy = unif(rng), uz = unif(rng);
      if (ux * ux + uy * uy + uz * uz > 1.0) continue;
      try_point(cx + 2.0 * eps * ux, cy + 2.0 * eps * uy, cz + 2.0 * eps * uz);
    }
    for (double radius : {0.6, 0.2, 0.06, 0.02}) {
      double px = bx, py = by, pz = bz;
      for (int s = 0; s < resolution / 4; ++s) {
        double ux = unif(rng), uy = unif(rng), uz = unif(rng);
        if (ux * ux + uy * uy + uz * uz > 1.0) continue;
        try_point(px + 2.0 * eps * radius * ux, py + 2.0 * eps * radius * uy,
                  pz + 2.0 * eps * radius * uz);
      }
    }
    return best;
  }

  Mat center = r;
  Mat best_pt = center;
  for (int s = 0; s < resolution; ++s) {
    Mat g = random_traceless_hermitian(n, rng);
    double radius = eps * std::abs(unif(rng));
    Mat cand = project_to_ball(center + (2.0 * radius / g.norm()) * g, r, eps, 64);
    double v = skew_info_raw(cand, hm, f, kDefaultEigFloor);
    if (v < best) {
      best = v;
      best_pt = cand;
    }
  }
  for (double radius : {0.3, 0.1, 0.03}) {
    Mat base_pt = best_pt;
    for (int s = 0; s < resolution / 4; ++s) {
      Mat g = random_traceless_hermitian(n, rng);
      Mat cand = project_to_ball(base_pt + (radius * eps / g.norm()) * g, r, eps, 64);
      double v = skew_info_raw(cand, hm, f, kDefaultEigFloor);
      if (v < best) {
        best = v;
        best_pt = cand;
      }
    }
  }
  return best;
}

double smooth_qfi(const DensityMatrix& rho, const HermitianOperator& h, double eps,
                  const OptimizerOptions& opts) {
  return 4.0 * smooth_skew_info(rho, h, make_sld(), eps, opts).value;
}

}  // namespace asym

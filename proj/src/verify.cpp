#include "asymrate/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "asymrate/asymptotics.hpp"
#include "asymrate/channels.hpp"
#include "asymrate/monotone.hpp"
#include "asymrate/reference_states.hpp"
#include "asymrate/sequences.hpp"
#include "asymrate/skew.hpp"
#include "asymrate/smoothing.hpp"

namespace asym {

bool VerifyReport::all_pass() const {
  for (const auto& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

std::vector<std::string> verify_suite_names() {
  return {"skew", "smooth", "channels", "sequences", "rates"};
}

Vec random_pure_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  v /= v.norm();
  return v;
}

DensityMatrix random_density_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

HermitianOperator random_hermitian_operator(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  return HermitianOperator(Mat(0.5 * (g + g.adjoint())));
}

Mat random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    cplx d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

HermitianOperator random_integer_hamiltonian(int dim, long long max_level, std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> levels(0, max_level);
  Mat d = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) d(i, i) = static_cast<double>(levels(rng));
  Mat u = random_unitary(dim, rng);
  return HermitianOperator(Mat(u * d * u.adjoint()));
}

namespace {

void add(std::vector<InvariantResult>& out, const std::string& name, double measured,
         double tolerance, const std::string& note = "") {
  out.push_back({name, measured <= tolerance, measured, tolerance, note});
}

void add_flag(std::vector<InvariantResult>& out, const std::string& name, bool pass,
              double measured, double tolerance, const std::string& note = "") {
  out.push_back({name, pass, measured, tolerance, note});
}

std::vector<MonotoneFunction> regular_builtins() {
  return {make_sld(), make_wyd(0.1), make_wyd(0.3), make_wyd(0.5), make_wyd(0.9)};
}

double commutator_norm(const Mat& a, const Mat& b) {
  return Mat(a * b - b * a).cwiseAbs().maxCoeff();
}

// worked qutrit mixture, wyd value: (11-7q)/16 - (1/8)(1 - q (x^p - 1)(x^{1-p} - 1)), x=(1-q)/q
double qutrit_wyd_closed_form(double q, double p) {
  double x = (1.0 - q) / q;
  double prod = (std::pow(x, p) - 1.0) * (std::pow(x, 1.0 - p) - 1.0);
  return (11.0 - 7.0 * q) / 16.0 - (1.0 - q * prod) / 8.0;
}

Mat bloch_state(double x, double y, double z) {
  Mat m(2, 2);
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = 0.5 * cplx(x, -y);
  m(1, 0) = 0.5 * cplx(x, y);
  return m;
}

void bloch_coords(const Mat& rho, double& x, double& y, double& z) {
  x = 2.0 * rho(1, 0).real();
  y = 2.0 * rho(1, 0).imag();
  z = (rho(0, 0) - rho(1, 1)).real();
}

// states in the trace-distance eps-ball of a qubit rho (half Euclidean Bloch distance)
std::vector<Mat> qubit_ball_samples(const DensityMatrix& rho, double eps, int count,
                                    std::mt19937_64& rng) {
  double cx, cy, cz;
  bloch_coords(rho.matrix(), cx, cy, cz);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    double ux = unif(rng), uy = unif(rng), uz = unif(rng);
    if (ux * ux + uy * uy + uz * uz > 1.0) continue;
    double x = cx + 2.0 * eps * ux, y = cy + 2.0 * eps * uy, z = cz + 2.0 * eps * uz;
    if (x * x + y * y + z * z > 1.0) continue;
    out.push_back(bloch_state(x, y, z));
  }
  return out;
}

QuantumChannel tensor_power_channel(const QuantumChannel& ch, int m) {
  std::vector<Mat> acc = ch.kraus();
  for (int i = 1; i < m; ++i) {
    std::vector<Mat> next;
    next.reserve(acc.size() * ch.kraus().size());
    for (const Mat& a : acc)
      for (const Mat& k : ch.kraus()) next.push_back(tensor(a, k));
    acc = std::move(next);
  }
  return QuantumChannel(acc);
}

// ---------------------------------------------------------------- skew suite

std::vector<InvariantResult> suite_skew() {
  std::vector<InvariantResult> out;
  std::mt19937_64 rng(20240001);

  {
    std::vector<MonotoneFunction> fs = regular_builtins();
    fs.push_back(make_rld());
    double worst = 0.0;
    bool ok = true;
    for (const auto& f : fs) {
      MonotoneValidationReport rep = validate_standard_monotone(f);
      ok = ok && rep.all_pass();
      worst = std::max({worst, rep.normalization_err, rep.symmetry_err,
                        std::max(0.0, -rep.monotone_slack), std::max(0.0, -rep.sandwich_slack)});
    }
    add_flag(out, "monotone_conditions_builtins", ok, worst, 1e-10,
             "normalization, symmetry, grid monotonicity, rld/sld envelope");
  }

  {
    double worst = 0.0;
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      MonotoneFunction f = make_wyd(p);
      double expo = -8.0 / std::min(p, 1.0 - p);
      double x = expo < -300.0 ? 1e-300 : std::pow(10.0, expo);
      worst = std::max(worst, std::abs(f.eval(x) - p * (1.0 - p)));
    }
    add(out, "wyd_limit_at_zero", worst, 1e-6, "f(x) vs p(1-p) deep in the small-x regime");
  }

  {
    double worst = 0.0;
    std::vector<MonotoneFunction> fs = regular_builtins();
    for (int t = 0; t < 200; ++t) {
      int dim = 2 + t % 4;
      Vec psi = random_pure_state(dim, rng);
      HermitianOperator h = random_hermitian_operator(dim, rng);
      DensityMatrix rho = DensityMatrix::pure(psi);
      double var = variance(psi, h.matrix());
      const MonotoneFunction& f = fs[static_cast<std::size_t>(t) % fs.size()];
      worst = std::max(worst, std::abs(skew_info(rho, h, f).value - var));
    }
    add(out, "pure_state_identity", worst, 1e-8, "200 random pure states, dims 2-5");
  }

  {
    double worst = 0.0;
    std::vector<MonotoneFunction> fs = regular_builtins();
    for (int t = 0; t < 200; ++t) {
      int dim = 2 + t % 4;
      DensityMatrix rho = random_density_matrix(dim, rng);
      HermitianOperator h = random_hermitian_operator(dim, rng);
      double isld = skew_info(rho, h, make_sld()).value;
      const MonotoneFunction& f = fs[static_cast<std::size_t>(t) % fs.size()];
      double v = skew_info(rho, h, f).value;
      worst = std::max({worst, isld - v / (2.0 * f.f0), v - isld});
    }
    add(out, "sandwich_sld", worst, 1e-9, "(1/2f0) I^f >= I^sld >= I^f, 200 mixed states");
  }

  {
    double worst = 0.0;
    std::vector<MonotoneFunction> fs = regular_builtins();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
      int dim = 2 + t % 3;
      int k = 2 + t % 3;
      HermitianOperator h = random_hermitian_operator(dim, rng);
      std::vector<DensityMatrix> parts;
      std::vector<double> w(static_cast<std::size_t>(k));
      double tot = 0.0;
      for (int i = 0; i < k; ++i) {
        parts.push_back(random_density_matrix(dim, rng));
        w[static_cast<std::size_t>(i)] = unif(rng) + 0.1;
        tot += w[static_cast<std::size_t>(i)];
      }
      Mat mix = Mat::Zero(dim, dim);
      double rhs = 0.0;
      const MonotoneFunction& f = fs[static_cast<std::size_t>(t) % fs.size()];
      for (int i = 0; i < k; ++i) {
        double p = w[static_cast<std::size_t>(i)] / tot;
        mix += p * parts[static_cast<std::size_t>(i)].matrix();
        rhs += p * skew_info(parts[static_cast<std::size_t>(i)], h, f).value;
      }
      worst = std::max(worst, skew_info(DensityMatrix(mix), h, f).value - rhs);
    }
    add(out, "convexity", worst, 1e-9, "mixtures of up to 4 states");
  }

  {
    double worst = 0.0;
    std::vector<MonotoneFunction> fs = regular_builtins();
    for (int t = 0; t < 20; ++t) {
      int da = 2 + t % 2, db = 2 + (t / 2) % 2;
      DensityMatrix ra = random_density_matrix(da, rng);
      DensityMatrix rb = random_density_matrix(db, rng);
      HermitianOperator ha = random_hermitian_operator(da, rng);
      HermitianOperator hb = random_hermitian_operator(db, rng);
      Mat h = tensor(ha.matrix(), Mat::Identity(db, db)) +
              tensor(Mat::Identity(da, da), hb.matrix());
      const MonotoneFunction& f = fs[static_cast<std::size_t>(t) % fs.size()];
      double joint = skew_info(DensityMatrix(Mat(tensor(ra.matrix(), rb.matrix()))),
                               HermitianOperator(h), f)
                         .value;
      double split = skew_info(ra, ha, f).value + skew_info(rb, hb, f).value;
      worst = std::max(worst, std::abs(joint - split));
    }
    add(out, "additivity_products", worst, 1e-8, "rho (x) sigma with H_a (x) I + I (x) H_b");
  }

  {
    // decompositions rho = sum_j |w_j><w_j| built from the rows of k x k unitaries
    auto cost_for = [](const EigenSystem& es, int dim, const Mat& h, const Mat& u) {
      int k = static_cast<int>(u.rows());
      double cost = 0.0;
      for (int j = 0; j < k; ++j) {
        Vec w = Vec::Zero(dim);
        for (int i = 0; i < dim && i < k; ++i) {
          double lam = std::max(es.eigenvalues(i), 0.0);
          w += u(j, i) * std::sqrt(lam) * es.eigenvectors.col(i);
        }
        double p = w.squaredNorm();
        if (p < 1e-15) continue;
        Vec phi = w / std::sqrt(p);
        cost += p * variance(phi, h);
      }
      return cost;
    };
    // near-identity unitary proposal; diagonal phases pinned so step -> 0 is local
    auto drift_unitary = [](const Mat& u, double step, std::mt19937_64& r) {
      int k = static_cast<int>(u.rows());
      std::normal_distribution<double> g;
      Mat d(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) d(i, j) = cplx(g(r), g(r));
      Eigen::HouseholderQR<Mat> qr(Mat(Mat::Identity(k, k) + step * d));
      Mat q = qr.householderQ();
      for (int i = 0; i < k; ++i) {
        double a = std::abs(q(i, i));
        if (a > 1e-12) q.col(i) *= std::conj(q(i, i)) / a;
      }
      return Mat(u * q);
    };
    double worst_upper = 0.0, worst_gap = 0.0;
    for (int t = 0; t < 50; ++t) {
      DensityMatrix rho = random_density_matrix(2, rng);
      HermitianOperator h = random_hermitian_operator(2, rng);
      EigenSystem es = eig_hermitian(rho.matrix());
      double isld = skew_info(rho, h, make_sld()).value;
      worst_upper = std::max(
          worst_upper, isld - cost_for(es, 2, h.matrix(), random_unitary(2 + t % 3, rng)));
      if (t < 20) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = 2; k <= 4; ++k) {
          Mat u_best = random_unitary(k, rng);
          double c_best = cost_for(es, 2, h.matrix(), u_best);
          for (int s = 0; s < 100; ++s) {
            Mat u = random_unitary(k, rng);
            double c = cost_for(es, 2, h.matrix(), u);
            if (c < c_best) { c_best = c; u_best = u; }
          }
          for (double step : {0.3, 0.1, 0.03, 0.01, 0.003})
            for (int s = 0; s < 80; ++s) {
              Mat u = drift_unitary(u_best, step, rng);
              double c = cost_for(es, 2, h.matrix(), u);
              if (c < c_best) { c_best = c; u_best = u; }
            }
          best = std::min(best, c_best);
        }
        worst_gap = std::max(worst_gap, std::abs(best - isld));
      }
    }
    add(out, "convex_roof_upper", worst_upper, 1e-9,
        "I^sld <= sum p Var over random qubit decompositions");
    add(out, "convex_roof_equality", worst_gap, 1e-3,
        "sampled decompositions with local polish");
  }

  {
    double worst = 0.0;
    std::vector<MonotoneFunction> fs = regular_builtins();
    for (int t = 0; t < 100; ++t) {
      int dim = 2 + t % 3;
      Mat hd = Mat::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) hd(i, i) = i;
      HermitianOperator h(hd);
      QuantumChannel ch = random_covariant_channel(h, h, 1 + t % 3, 5000 + t);
      DensityMatrix rho = random_density_matrix(dim, rng);
      const MonotoneFunction& f = fs[static_cast<std::size_t>(t) % fs.size()];
      worst = std::max(worst,
                       skew_info(apply(ch, rho), h, f).value - skew_info(rho, h, f).value);
    }
    add(out, "covariant_channel_monotonicity", worst, 1e-8, "100 generated channels, dims 2-4");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      int dim = 2 + t % 4;
      DensityMatrix rho = random_density_matrix(dim, rng);
      HermitianOperator h = random_hermitian_operator(dim, rng);
      worst = std::max(worst, std::abs(qfi(rho, h) - 4.0 * skew_info(rho, h, make_sld()).value));
    }
    worst = std::max(worst, std::abs(qfi(DensityMatrix::pure(phi_coh()), coh_hamiltonian()) - 1.0));
    worst = std::max(worst, std::abs(qfi(qutrit_example_state(0.5), qutrit_example_hamiltonian()) -
                                     11.0 / 8.0));
    add(out, "qfi_consistency", worst, 1e-9, "4 I^sld cross-check plus worked values");
  }

  {
    double worst = 0.0;
    Vec psi1 = qutrit_example_psi1(), psi2 = qutrit_example_psi2();
    HermitianOperator h = qutrit_example_hamiltonian();
    for (int i = 0; i <= 10; ++i) {
      double q = i / 10.0;
      double closed = two_pure_mixture_closed_form(q, psi1, psi2, h, make_sld());
      worst = std::max(worst, std::abs(closed - qutrit_example_sld_closed_form(q)));
      worst = std::max(worst,
                       std::abs(skew_info(qutrit_example_state(q), h, make_sld()).value -
                                qutrit_example_sld_closed_form(q)));
      if (i > 0 && i < 10)
        for (double p : {0.1, 0.5}) {
          double direct = skew_info(qutrit_example_state(q), h, make_wyd(p)).value;
          worst = std::max(worst, std::abs(direct - qutrit_wyd_closed_form(q, p)));
          worst = std::max(worst, std::abs(two_pure_mixture_closed_form(q, psi1, psi2, h,
                                                                        make_wyd(p)) -
                                           qutrit_wyd_closed_form(q, p)));
        }
    }
    add(out, "worked_qutrit_closed_forms", worst, 1e-9,
        "(11-15q+8q^2)/16 and the wyd expression vs direct evaluation");
  }

  {
    double worst = 0.0;
    Vec psi1 = qutrit_example_psi1(), psi2 = qutrit_example_psi2();
    HermitianOperator h = qutrit_example_hamiltonian();
    for (int i = 1; i <= 9; ++i) {
      double q = i / 10.0;
      double prev = std::numeric_limits<double>::infinity();
      for (double p : {1e-2, 1e-3, 1e-4}) {
        double err = std::abs(4.0 * two_pure_mixture_closed_form(q, psi1, psi2, h, make_wyd(p)) -
                              wyd_p_to_zero_bound(q));
        if (err > prev + 1e-12) worst = std::max(worst, 1.0);  // must improve along p -> 0
        prev = err;
      }
      worst = std::max(worst, prev);
    }
    add(out, "wyd_small_p_limit", worst, 1e-3, "4 I^{wyd,p} -> (9-7q)/4 along p in {1e-2..1e-4}");
  }

  return out;
}

// -------------------------------------------------------------- smooth suite

std::vector<InvariantResult> suite_smooth() {
  std::vector<InvariantResult> out;
  std::mt19937_64 rng(20240002);
  MonotoneFunction sld = make_sld();

  OptimizerOptions qutrit_opts;
  qutrit_opts.iterations = 800;
  qutrit_opts.restarts = 2;

  {
    double worst_ball = 0.0, worst_value = 0.0, worst_upper = 0.0;
    for (int t = 0; t < 8; ++t) {
      int dim = t < 6 ? 2 : 3;
      DensityMatrix rho = random_density_matrix(dim, rng);
      HermitianOperator h = dim == 2 ? coh_hamiltonian() : qutrit_example_hamiltonian();
      double eps = (t % 3 == 0) ? 0.05 : (t % 3 == 1 ? 0.1 : 0.2);
      OptimizerOptions opts = dim == 2 ? OptimizerOptions{} : qutrit_opts;
      opts.seed = 777 + static_cast<std::uint64_t>(t);
      SmoothingResult res = smooth_skew_info(rho, h, sld, eps, opts);
      worst_ball = std::max(worst_ball, trace_distance(rho, res.witness) - eps);
      worst_value = std::max(worst_value,
                             std::abs(skew_info(res.witness, h, sld).value - res.value));
      worst_upper = std::max(worst_upper, res.value - skew_info(rho, h, sld).value);
    }
    add(out, "witness_in_ball", worst_ball, 1e-8, "");
    add(out, "witness_value_consistent", worst_value, 1e-8, "");
    add(out, "value_below_unsmoothed", worst_upper, 1e-8, "");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 4; ++t) {
      DensityMatrix rho = random_density_matrix(2, rng);
      HermitianOperator h = coh_hamiltonian();
      double prev = std::numeric_limits<double>::infinity();
      for (double eps : {0.05, 0.1, 0.2}) {
        OptimizerOptions opts;
        opts.seed = 800 + static_cast<std::uint64_t>(t);
        double v = smooth_skew_info(rho, h, sld, eps, opts).value;
        worst = std::max(worst, v - prev);  // larger ball must not raise the value
        prev = v;
      }
    }
    add(out, "eps_monotonicity", worst, 1e-6, "nested balls, eps in {0.05, 0.1, 0.2}");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 4; ++t) {
      Vec psi = random_pure_state(2, rng);
      DensityMatrix pure = DensityMatrix::pure(psi);
      HermitianOperator h = coh_hamiltonian();
      QuantumChannel deph = dephasing_channel(h);
      DensityMatrix target = apply(deph, pure);
      double d = trace_distance(pure, target);
      // walk 96% of the way to the symmetric state; the leftover radius still covers it
      Mat blend = 0.04 * pure.matrix() + 0.96 * target.matrix();
      double eps = 0.05 * d + 1e-6;
      worst = std::max(worst, brute_force_smooth(DensityMatrix(blend), h, sld, eps, 20000,
                                                 901 + static_cast<std::uint64_t>(t)));
    }
    add(out, "symmetric_state_in_ball", worst, 1e-6, "value vanishes when the ball meets the commutant");
  }

  {
    double worst = 0.0;
    MonotoneFunction wyd = make_wyd(0.3);
    for (int t = 0; t < 10; ++t) {
      DensityMatrix rho = random_density_matrix(2, rng);
      HermitianOperator h = coh_hamiltonian();
      const MonotoneFunction& f = (t % 2 == 0) ? sld : wyd;
      OptimizerOptions opts;
      opts.seed = 1000 + static_cast<std::uint64_t>(t);
      double opt = smooth_skew_info(rho, h, f, 0.1, opts).value;
      double oracle = brute_force_smooth(rho, h, f, 0.1, 200000, 31 + static_cast<std::uint64_t>(t));
      worst = std::max(worst, std::abs(opt - oracle));
    }
    add(out, "matches_bloch_oracle", worst, 2e-3, "10 random qubits at eps = 0.1");
  }

  {
    double worst = 0.0;
    std::uniform_real_distribution<double> unif(0.1, 0.9);
    for (int t = 0; t < 6; ++t) {
      DensityMatrix a = random_density_matrix(2, rng);
      DensityMatrix b = random_density_matrix(2, rng);
      double p = unif(rng);
      Mat mix = p * a.matrix() + (1.0 - p) * b.matrix();
      HermitianOperator h = coh_hamiltonian();
      double lhs = brute_force_smooth(DensityMatrix(mix), h, sld, 0.1, 100000, 41 + t);
      double rhs = p * brute_force_smooth(a, h, sld, 0.1, 100000, 42 + t) +
                   (1.0 - p) * brute_force_smooth(b, h, sld, 0.1, 100000, 43 + t);
      worst = std::max(worst, lhs - rhs);
    }
    add(out, "smooth_convexity_oracle", worst, 1e-3, "qubit mixtures, oracle-evaluated");
  }

  {
    double worst = 0.0;
    HermitianOperator h = coh_hamiltonian();
    for (int t = 0; t < 6; ++t) {
      QuantumChannel ch = random_covariant_channel(h, h, 2, 6100 + t);
      DensityMatrix rho = random_density_matrix(2, rng);
      double rhs = brute_force_smooth(rho, h, sld, 0.1, 100000, 51 + t);
      std::vector<Mat> images;
      for (const Mat& s : qubit_ball_samples(rho, 0.1, 400, rng)) {
        Mat img = Mat::Zero(2, 2);
        for (const Mat& k : ch.kraus()) img += k * s * k.adjoint();
        images.push_back(img);
      }
      double lhs = brute_force_smooth(apply(ch, rho), h, sld, 0.1, 100000, 52 + t, &images);
      worst = std::max(worst, lhs - rhs);
    }
    add(out, "smooth_covariant_monotonicity_oracle", worst, 1e-3,
        "image of the ball seeds the post-channel search");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
      DensityMatrix rho = random_density_matrix(2, rng);
      HermitianOperator h = coh_hamiltonian();
      OptimizerOptions opts;
      opts.seed = 1100 + static_cast<std::uint64_t>(t);
      worst = std::max(worst, std::abs(smooth_qfi(rho, h, 0.1, opts) -
                                       4.0 * smooth_skew_info(rho, h, sld, 0.1, opts).value));
    }
    worst = std::max(worst,
                     std::abs(smooth_qfi(DensityMatrix::pure(phi_coh()), coh_hamiltonian(), 0.0) - 1.0));
    Mat sym = Mat::Zero(2, 2);
    sym(0, 0) = 0.7;
    sym(1, 1) = 0.3;
    worst = std::max(worst, smooth_qfi(DensityMatrix(sym), coh_hamiltonian(), 0.2));
    add(out, "smooth_qfi_consistency", worst, 1e-12, "4x the sld smoothing; exact on symmetric inputs");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      int dim = 2 + t % 2;
      DensityMatrix rho = random_density_matrix(dim, rng);
      HermitianOperator h = random_hermitian_operator(dim, rng);
      worst = std::max(worst, std::abs(smooth_skew_info(rho, h, sld, 0.0).value -
                                       skew_info(rho, h, sld).value));
    }
    add(out, "eps_zero_degenerate_ball", worst, 1e-15, "");
  }

  {
    DensityMatrix phi = DensityMatrix::pure(phi_coh());
    HermitianOperator h = coh_hamiltonian();
    double at_half = brute_force_smooth(phi, h, sld, 0.5, 50000, 61);
    double at_tenth = brute_force_smooth(phi, h, sld, 0.1, 200000, 62);
    bool pass = at_half <= 1e-12 && at_tenth > 1e-6 && at_tenth < 0.25;
    add_flag(out, "phi_coh_brackets", pass, at_tenth, 0.25,
             "eps=0.5 reaches the dephased state; eps=0.1 stays in (0, 1/4)");
  }

  return out;
}

// ------------------------------------------------------------ channels suite

std::vector<InvariantResult> suite_channels() {
  std::vector<InvariantResult> out;
  std::mt19937_64 rng(20240003);

  std::vector<QuantumChannel> generated;
  std::vector<HermitianOperator> gen_h;
  for (int t = 0; t < 100; ++t) {
    int dim = 2 + t % 3;
    Mat hd = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) hd(i, i) = i;
    HermitianOperator h(hd);
    generated.push_back(random_covariant_channel(h, h, 1 + t % 3, 7000 + t));
    gen_h.push_back(h);
  }

  {
    double worst = 0.0;
    for (std::size_t t = 0; t < generated.size(); ++t)
      worst = std::max(worst, is_covariant(generated[t], gen_h[t], gen_h[t]).residual);
    add(out, "generated_channels_covariant", worst, 1e-9, "100 seeded constructions, dims 2-4");
  }

  {
    double worst_comp = 0.0, worst_psd = 0.0;
    for (const auto& ch : generated) {
      Mat acc = Mat::Zero(ch.dim_in(), ch.dim_in());
      for (const Mat& k : ch.kraus()) acc += k.adjoint() * k;
      worst_comp = std::max(worst_comp,
                            Mat(acc - Mat::Identity(ch.dim_in(), ch.dim_in())).cwiseAbs().maxCoeff());
      EigenSystem es = eig_hermitian(ch.choi());
      worst_psd = std::max(worst_psd, -es.eigenvalues(0));
    }
    add(out, "kraus_completeness", worst_comp, 1e-9, "");
    add(out, "choi_positive", worst_psd, 1e-10, "");
  }

  {
    double worst = 0.0;
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    for (std::size_t t = 0; t < generated.size(); ++t) {
      int dim = generated[t].dim_in();
      Mat sym = Mat::Zero(dim, dim);
      double tot = 0.0;
      for (int i = 0; i < dim; ++i) {
        sym(i, i) = unif(rng);
        tot += sym(i, i).real();
      }
      sym /= tot;
      DensityMatrix img = apply(generated[t], DensityMatrix(sym));
      worst = std::max(worst, commutator_norm(img.matrix(), gen_h[t].matrix()));
    }
    add(out, "resource_non_generation", worst, 1e-8, "symmetric inputs stay symmetric");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      int dim = 2 + t % 3;
      HermitianOperator h = random_hermitian_operator(dim, rng);
      QuantumChannel deph = dephasing_channel(h);
      DensityMatrix rho = random_density_matrix(dim, rng);
      worst = std::max(worst, skew_info(apply(deph, rho), h, make_sld()).value);
    }
    HermitianOperator hc = coh_hamiltonian();
    QuantumChannel deph = dephasing_channel(hc);
    Mat expect = Mat::Zero(2, 2);
    expect(0, 0) = 0.5;
    expect(1, 1) = 0.5;
    worst = std::max(worst, Mat(apply(deph, DensityMatrix::pure(phi_coh())).matrix() - expect)
                                .cwiseAbs()
                                .maxCoeff());
    Mat sym = Mat::Zero(2, 2);
    sym(0, 0) = 0.3;
    sym(1, 1) = 0.7;
    worst = std::max(worst, Mat(apply(deph, DensityMatrix(sym)).matrix() - sym).cwiseAbs().maxCoeff());
    add(out, "dephasing_properties", worst, 1e-10, "zero skew information after dephasing");
  }

  {
    double least = std::numeric_limits<double>::infinity();
    HermitianOperator h = qutrit_example_hamiltonian();
    for (int t = 0; t < 5; ++t) {
      std::vector<Mat> kraus{random_unitary(3, rng)};
      least = std::min(least, is_covariant(QuantumChannel(kraus), h, h).residual);
    }
    add_flag(out, "noncovariant_unitary_detected", least > 1e-3, least, 1e-3,
             "haar unitaries must fail the residual check");
  }

  {
    double worst = 0.0;
    DensityMatrix rho = random_density_matrix(3, rng);
    std::vector<Mat> id{Mat::Identity(3, 3)};
    worst = std::max(worst,
                     Mat(apply(QuantumChannel(id), rho).matrix() - rho.matrix()).cwiseAbs().maxCoeff());
    DensityMatrix sigma = random_density_matrix(2, rng);
    std::vector<Mat> pt;
    for (int e = 0; e < 2; ++e) {
      Mat k = Mat::Zero(3, 6);
      for (int i = 0; i < 3; ++i) k(i, i * 2 + e) = 1.0;
      pt.push_back(k);
    }
    Mat joint = tensor(rho.matrix(), sigma.matrix());
    worst = std::max(worst, Mat(apply(QuantumChannel(pt), DensityMatrix(joint)).matrix() -
                                rho.matrix())
                                .cwiseAbs()
                                .maxCoeff());
    add(out, "identity_and_partial_trace", worst, 1e-10, "");
  }

  {
    double worst = 0.0;
    HermitianOperator h = qutrit_example_hamiltonian();
    DensityMatrix rho = random_density_matrix(3, rng);
    for (double s : {0.7, 1.3}) {
      EigenSystem es = eig_hermitian(h.matrix());
      Mat phases = Mat::Zero(3, 3);
      for (int i = 0; i < 3; ++i) phases(i, i) = std::exp(cplx(0.0, -s * es.eigenvalues(i)));
      Mat u = es.eigenvectors * phases * es.eigenvectors.adjoint();
      QuantumChannel ch({u});
      worst = std::max(worst, is_covariant(ch, h, h).residual);
      worst = std::max(worst, Mat(apply(ch, rho).matrix() - time_evolve(rho, h, s).matrix())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    add(out, "unitary_evolution_covariant", worst, 1e-9, "e^{-iHs} matches time_evolve");
  }

  {
    // input and output spectra may differ when the polynomial division works out
    Mat h_in = Mat::Zero(2, 2);
    h_in(1, 1) = 1.0;
    QuantumChannel ch = random_covariant_channel(HermitianOperator(h_in),
                                                 qutrit_example_hamiltonian(), 3, 808);
    double res = is_covariant(ch, HermitianOperator(h_in), qutrit_example_hamiltonian()).residual;
    Mat sym = Mat::Zero(2, 2);
    sym(0, 0) = 0.25;
    sym(1, 1) = 0.75;
    DensityMatrix img = apply(ch, DensityMatrix(sym));
    double comm = commutator_norm(img.matrix(), qutrit_example_hamiltonian().matrix());
    add(out, "dimension_changing_covariant", std::max(res, comm), 1e-8,
        "qubit to qutrit with a diag(0,1,2) ancilla");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
      const QuantumChannel& ch = generated[static_cast<std::size_t>(t) * 7];
      QuantumChannel back = channel_from_json(channel_to_json(ch));
      for (std::size_t k = 0; k < ch.kraus().size(); ++k)
        worst = std::max(worst, Mat(ch.kraus()[k] - back.kraus()[k]).cwiseAbs().maxCoeff());
    }
    add(out, "kraus_json_roundtrip", worst, 1e-15, "");
  }

  return out;
}

// ----------------------------------------------------------- sequences suite

std::vector<InvariantResult> suite_sequences() {
  std::vector<InvariantResult> out;
  std::mt19937_64 rng(20240004);

  {
    double worst = 0.0;
    std::vector<std::pair<double, double>> pairs{{0.5, 0.5}, {1.0, 2.0}, {-0.5, 1.0},
                                                 {-0.5, 2.0}, {2.0, -0.5}, {-0.5, 0.5}};
    for (auto [a, b] : pairs) {
      IntSequence pa = poisson_certified(a, 1e-12);
      IntSequence pb = poisson_certified(b, 1e-12);
      IntSequence conv = convolve(pa, pb);
      IntSequence direct = poisson_certified(a + b, 1e-12);
      long long hi = std::min(conv.last_index(), direct.last_index());
      for (long long n = 0; n <= hi; ++n)
        worst = std::max(worst, std::abs(conv.at(n) - direct.at(n)));
    }
    add(out, "poisson_semigroup", worst, 1e-9, "P_a * P_b = P_{a+b}, signed parameters included");
  }

  {
    double worst = 0.0;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> len(3, 6), off(-2, 2);
    for (int t = 0; t < 10; ++t) {
      IntSequence q;
      q.offset = off(rng);
      q.values.resize(static_cast<std::size_t>(len(rng)));
      for (double& v : q.values) v = unif(rng);
      q.values[0] += q.values[0] >= 0 ? 0.6 : -0.6;
      IntSequence inv = inverse_sequence(q, 40);
      IntSequence conv = convolve(q, inv);
      for (long long n = 0; n <= 40; ++n)
        worst = std::max(worst, std::abs(conv.at(n) - (n == 0 ? 1.0 : 0.0)));
    }
    add(out, "convolution_inverse_identity", worst, 1e-9, "");
  }

  {
    IntSequence p = poisson_certified(0.5, 1e-16);
    IntSequence inv = inverse_sequence(p, 30);
    IntSequence direct = poisson(-0.5, 30);
    double worst = 0.0;
    for (long long n = 0; n <= 30; ++n) worst = std::max(worst, std::abs(inv.at(n) - direct.at(n)));
    add(out, "poisson_inverse", worst, 1e-8, "inverse of P_0.5 reproduces P_{-0.5}");
  }

  {
    double worst = std::abs(poisson(0.0, 5).at(0) - 1.0);
    worst = std::max(worst, std::abs(poisson(1.0, 10).at(0) - std::exp(-1.0)));
    worst = std::max(worst, std::abs(poisson(-1.0, 10).at(1) + std::exp(1.0)));
    worst = std::max(worst, poisson_certified(2.0, 1e-10).tail_bound - 1e-10);
    add(out, "poisson_point_values", worst, 1e-12, "");
  }

  {
    // strictly increasing while the value is resolvable below 1; the tail
    // saturates to 1.0 exactly in double precision, so only nondecreasing there
    double prev = truncated_normal_second_moment(0.0);
    double min_step = std::numeric_limits<double>::infinity();
    double min_tail_step = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      double v = truncated_normal_second_moment(0.04 * i);
      if (0.04 * i <= 8.0)
        min_step = std::min(min_step, v - prev);
      else
        min_tail_step = std::min(min_tail_step, v - prev);
      prev = v;
    }
    add_flag(out, "g_strictly_increasing", min_step > 0.0 && min_tail_step >= 0.0,
             std::max(0.0, -std::min(min_step, min_tail_step)), 0.0,
             "strict on [0, 8], nondecreasing beyond");
    double worst = std::abs(truncated_normal_second_moment(0.0));
    worst = std::max(worst, std::abs(truncated_normal_second_moment(1.0) - 0.19875) - 2e-5);
    add(out, "g_reference_values", std::max(worst, 0.0), 1e-6, "g(0) = 0, g(1) = 0.19875");
    double worst_inv = 0.0;
    for (int i = 0; i <= 50; ++i) {
      double x = 0.1 * i;
      worst_inv = std::max(worst_inv, std::abs(truncated_normal_second_moment_inverse(
                                                   truncated_normal_second_moment(x)) -
                                               x));
    }
    add(out, "g_inverse_identity", worst_inv, 1e-7, "");
  }

  {
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    double last = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      last = gamma_lambda(1.0, eps);
      decreasing = decreasing && last < prev;
      prev = last;
    }
    add_flag(out, "gamma_grid", decreasing && last < 1e-2, last, 1e-2,
             "gamma_1 decreasing along eps in {1e-1..1e-4}");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      int dim = 2 + t % 4;
      HermitianOperator h = random_integer_hamiltonian(dim, dim, rng);
      Vec psi = random_pure_state(dim, rng);
      EnergyDistribution p = energy_distribution(psi, h);
      double fisher = qfi(DensityMatrix::pure(psi), h);
      FmaxResult fmax = f_max(p);
      double fmin = f_min(p);
      if (!fmax.infinite) worst = std::max(worst, fisher - fmax.value);
      worst = std::max(worst, fmin - fisher);
    }
    add(out, "fisher_sandwich", worst, 1e-6, "f_min <= F <= f_max on 20 integer-spectrum states");
  }

  {
    EnergyDistribution point;
    point.offset = 3;
    point.values = {1.0};
    FmaxResult pm_max = f_max(point);
    double pm_min = f_min(point);
    IntSequence trunc = poisson_certified(0.5, 1e-12);
    FmaxResult tp_max = f_max(trunc);
    double tp_min = f_min(trunc);
    EnergyDistribution half;
    half.offset = 0;
    half.values = {0.5, 0.5};
    FmaxResult hh_max = f_max(half);
    double hh_min = f_min(half);
    double worst = std::max({std::abs(pm_max.value), std::abs(pm_min), std::abs(tp_max.value - 2.0),
                             std::abs(tp_min - 2.0), std::abs(hh_min)});
    bool pass = worst <= 1e-3 && !pm_max.infinite && !tp_max.infinite && hh_max.infinite;
    add_flag(out, "maxmin_reference_cases", pass, worst, 1e-3,
             "point mass, truncated P_0.5, and the (1/2,1/2) distribution");
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 12; ++t) {
      int dim = 2 + t % 3;
      Vec target = random_pure_state(dim, rng);
      DensityMatrix junk = random_density_matrix(dim, rng);
      double tmix = (t % 3 == 0) ? 0.02 : (t % 3 == 1 ? 0.1 : 0.3);
      Mat rho_m = (1.0 - tmix) * (target * target.adjoint()) + tmix * junk.matrix();
      DensityMatrix rho(rho_m);
      double delta = 1.0 - (target.adjoint() * rho.matrix() * target).value().real();
      if (delta >= 0.5) continue;
      EigenSystem es = eig_hermitian(rho.matrix());
      Vec top = es.eigenvectors.col(dim - 1);
      double overlap = std::abs(cplx(top.dot(target)));
      worst = std::max(worst, (1.0 - 2.0 * delta) - overlap);
      HermitianOperator h = random_hermitian_operator(dim, rng);
      for (const MonotoneFunction& f : {make_sld(), make_wyd(0.3)}) {
        double bound = (f.f0 / f.eval(delta / (1.0 - delta))) * (1.0 - 2.0 * delta) *
                       (1.0 - 2.0 * delta) * variance(top, h.matrix());
        worst = std::max(worst, bound - skew_info(rho, h, f).value - 1e-8);
      }
    }
    add(out, "top_eigenvector_bound", std::max(worst, 0.0), 1e-8,
        "overlap and skew bounds from the infidelity");
  }

  {
    IntSequence exact = poisson_certified(2.0, 1e-12);
    VarianceBoundReport rep = verify_variance_bound(exact, 0.5, 4, 0.01);
    double worst = rep.pass ? 0.0 : rep.bound - rep.variance;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      IntSequence q = exact;
      long long mode = 2;
      double mass = 0.005 + 0.004 * unif(rng);
      long long dst = (t % 2 == 0) ? mode + 1 + t % 3 : mode - 1;
      double& src = q.values[static_cast<std::size_t>(mode - q.offset)];
      double& dstv = q.values[static_cast<std::size_t>(dst - q.offset)];
      src -= mass;
      dstv += mass;
      VarianceBoundReport r = verify_variance_bound(q, 0.5, 4, 0.05);
      if (!r.pass) worst = std::max(worst, r.bound - r.variance);
    }
    add(out, "variance_lower_bound", worst, 1e-12, "exact and perturbed Poisson inputs");
  }

  {
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    double worst_bound = 0.0;
    for (int m : {8, 16, 32, 64}) {
      std::vector<double> b(static_cast<std::size_t>(m) + 1);
      b[0] = std::pow(0.5, m);
      for (int j = 0; j < m; ++j)
        b[static_cast<std::size_t>(j) + 1] = b[static_cast<std::size_t>(j)] *
                                             static_cast<double>(m - j) / (j + 1);
      EnergyDistribution p;
      p.offset = 0;
      p.values = b;
      PoissonShiftFit fit = poisson_shift_fit(p, m / 4.0);
      decreasing = decreasing && fit.tv < prev;
      prev = fit.tv;
      VarianceBoundReport rep = verify_variance_bound(p, 0.25, m, fit.tv + 0.01);
      if (!rep.pass) worst_bound = std::max(worst_bound, rep.bound - rep.variance);
    }
    add_flag(out, "binomial_poisson_fit", decreasing && worst_bound <= 0.0,
             std::max(worst_bound, 0.0), 0.0, "shift-fit tv decreasing over m in {8,16,32,64}");
  }

  {
    double worst = 0.0;
    for (double lam : {0.25, 1.0})
      for (double eps : {1e-2, 1e-3}) {
        SmoothingBoundParams p = smoothing_bound_params(lam, eps, make_sld());
        worst = std::max(worst, std::abs(p.alpha_eps * std::sqrt(lam) -
                                         truncated_normal_second_moment_inverse(1.0 - eps)));
        worst = std::max(worst, -p.delta_f);
      }
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    double last = 0.0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
      last = smoothing_bound_params(0.25, eps, make_sld()).delta_f;
      decreasing = decreasing && last < prev;
      prev = last;
    }
    bool pass = worst <= 1e-8 && decreasing && last < 1e-2;
    add_flag(out, "smoothing_bound_params", pass, std::max(worst, last), 1e-2,
             "alpha relation exact; delta_f >= 0 and vanishing along the grid");
  }

  {
    double worst = 0.0;
    Vec generic = random_pure_state(3, rng);
    Mat h012 = qutrit_example_hamiltonian().matrix();
    NormalizedPeriod a = normalize_period(generic, HermitianOperator(h012));
    worst = std::max(worst, Mat(a.h.matrix() - h012).cwiseAbs().maxCoeff());
    Mat h024 = 2.0 * h012;
    NormalizedPeriod b = normalize_period(generic, HermitianOperator(h024));
    worst = std::max(worst, Mat(b.h.matrix() - h012).cwiseAbs().maxCoeff());
    Vec two = random_pure_state(2, rng);
    Mat h34 = Mat::Zero(2, 2);
    h34(0, 0) = 3.0;
    h34(1, 1) = 4.0;
    NormalizedPeriod c = normalize_period(two, HermitianOperator(h34));
    worst = std::max(worst, Mat(c.h.matrix() - coh_hamiltonian().matrix()).cwiseAbs().maxCoeff());
    bool threw = false;
    try {
      Mat h3 = Mat::Zero(3, 3);
      h3(1, 1) = 1.0;
      h3(2, 2) = std::sqrt(2.0);
      normalize_period(random_pure_state(3, rng), HermitianOperator(h3));
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    add_flag(out, "normalize_period_cases", worst <= 1e-12 && threw, worst, 1e-12,
             "rescale, shift, and the incommensurate error path");
  }

  {
    double worst = 0.0;
    EnergyDistribution coh = energy_distribution(phi_coh(), coh_hamiltonian());
    worst = std::max(worst, std::abs(coh.at(0) - 0.5));
    worst = std::max(worst, std::abs(coh.at(1) - 0.5));
    Vec e2 = Vec::Zero(3);
    e2(2) = 1.0;
    EnergyDistribution point = energy_distribution(e2, qutrit_example_hamiltonian());
    worst = std::max(worst, std::abs(point.at(2) - 1.0));
    EnergyDistribution p1 = energy_distribution(qutrit_example_psi1(), qutrit_example_hamiltonian());
    worst = std::max(worst, std::abs(p1.at(0) - 0.25));
    worst = std::max(worst, std::abs(p1.at(1) - 0.25));
    worst = std::max(worst, std::abs(p1.at(2) - 0.5));
    bool threw = false;
    try {
      Mat h = Mat::Zero(2, 2);
      h(1, 1) = 1.5;
      energy_distribution(phi_coh(), HermitianOperator(h));
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    add_flag(out, "energy_distribution_cases", worst <= 1e-12 && threw, worst, 1e-12,
             "worked distributions plus the non-integer error path");
  }

  return out;
}

// --------------------------------------------------------------- rates suite

std::vector<InvariantResult> suite_rates() {
  std::vector<InvariantResult> out;
  std::mt19937_64 rng(20240005);
  MonotoneFunction sld = make_sld();

  {
    double worst = 0.0;
    for (double r : {1.0, 0.5}) {
      StateFamily fam = iid_family(phi_coh(), coh_hamiltonian(), r);
      for (int m = 1; m <= 5; ++m) {
        auto [rho, h] = fam.generator(m);
        double copies = std::ceil(r * m - 1e-12);
        double expect = copies / m * 0.25;
        worst = std::max(worst, std::abs(skew_info(rho, h, sld).value / m - expect));
        auto [lrho, lh] = fam.reduced(m);
        worst = std::max(worst, std::abs(skew_info(lrho, lh, sld).value / m - expect));
      }
    }
    StateFamily unit = iid_family(phi_coh(), coh_hamiltonian(), 1.0);
    auto [rho3, h3] = unit.generator(3);
    EigenSystem es = eig_hermitian(h3.matrix());
    worst = std::max(worst, std::abs(es.eigenvalues(0) - 0.0));
    worst = std::max(worst, std::abs(es.eigenvalues(es.eigenvalues.size() - 1) - 3.0));
    if (rho3.dim() != 8) worst = std::max(worst, 1.0);
    StateFamily halfr = iid_family(phi_coh(), coh_hamiltonian(), 0.5);
    if (halfr.generator(2).first.dim() != 2) worst = std::max(worst, 1.0);
    add(out, "iid_unsmoothed_exact", worst, 1e-8, "(1/m) I^f = ceil(Rm)/m Var, full and reduced");
  }

  {
    StateFamily fam = iid_family(phi_coh(), coh_hamiltonian(), 1.0);
    OptimizerOptions opts;
    opts.iterations = 300;
    opts.restarts = 1;
    RateReport rep = estimate_rates(fam, sld, {2, 3, 4}, {0.2, 0.1}, opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.values.size(); ++i)
      for (std::size_t j = 0; j + 1 < rep.values[i].size(); ++j)
        worst = std::max(worst, rep.values[i][j] - rep.values[i][j + 1]);
    worst = std::max(worst, rep.inf_estimate - rep.sup_estimate);
    worst = std::max(worst, dist_upper_bound(rep) - cost_lower_bound(rep));
    add(out, "report_ordering", worst, 1e-3, "eps rows nonincreasing; cost bound >= dist bound");
  }

  {
    StateFamily sym;
    sym.label = "symmetric";
    sym.m_cap = 6;
    sym.generator = [](int m) {
      int dim = 1 << m;
      Mat rho = Mat::Zero(dim, dim);
      double tot = 0.0;
      for (int i = 0; i < dim; ++i) {
        rho(i, i) = 1.0 + (i % 3);
        tot += rho(i, i).real();
      }
      rho /= tot;
      Mat h1 = Mat::Zero(2, 2);
      h1(1, 1) = 1.0;
      return std::make_pair(DensityMatrix(rho), iid_hamiltonian(HermitianOperator(h1), m));
    };
    OptimizerOptions opts;
    opts.iterations = 50;
    RateReport rep = estimate_rates(sym, sld, {2, 3}, {0.1}, opts);
    add(out, "symmetric_family_zero", std::abs(rep.sup_estimate) + std::abs(rep.inf_estimate),
        1e-15, "commuting states give exactly zero at every cell");
  }

  {
    HermitianOperator h1 = coh_hamiltonian();
    QuantumChannel lambda1 = random_covariant_channel(h1, h1, 2, 909);
    StateFamily orig = iid_family(phi_coh(), h1, 1.0);
    StateFamily image;
    image.label = "post-processed";
    image.m_cap = 3;
    image.generator = [&](int m) {
      auto [rho, h] = orig.generator(m);
      return std::make_pair(apply(tensor_power_channel(lambda1, m), rho), h);
    };
    OptimizerOptions opts;
    opts.iterations = 600;
    opts.restarts = 2;
    RateReport before = estimate_rates(orig, sld, {2, 3}, {0.1}, opts);
    RateReport after = estimate_rates(image, sld, {2, 3}, {0.1}, opts);
    add(out, "covariant_postprocessing", after.sup_estimate - before.sup_estimate, 5e-3,
        "elementwise covariant channel never raises the rate estimate");
  }

  {
    StateFamily fam = iid_family(phi_coh(), coh_hamiltonian(), 1.0);
    auto [rho6, h6] = fam.generator(6);
    double eps = 1e-6;
    double worst = 0.0;
    for (const MonotoneFunction& f : {make_sld(), make_wyd(0.3)}) {
      double delta_f = smoothing_bound_params(0.25, eps, f).delta_f;
      for (int t = 0; t < 5; ++t) {
        DensityMatrix pert = random_density_matrix(rho6.dim(), rng);
        Mat sigma = (1.0 - 0.5 * eps) * rho6.matrix() + 0.5 * eps * pert.matrix();
        double val = skew_info(DensityMatrix(sigma), h6, f).value / 6.0;
        worst = std::max(worst, (0.25 - delta_f - 0.1) - val);
      }
    }
    add(out, "variance_rate_bound", std::max(worst, 0.0), 1e-12,
        "states near the product state keep (1/m) I^f above Var - delta_f - 0.1");
  }

  {
    StateFamily fam = iid_family(phi_coh(), coh_hamiltonian(), 1.0);
    OptimizerOptions opts;
    opts.iterations = 500;
    opts.restarts = 1;
    RateReport rep = estimate_rates(fam, sld, {4, 6, 8, 10, 12}, {0.2, 0.1, 0.05}, opts);
    double worst = std::max(std::abs(rep.sup_estimate - 0.25), std::abs(rep.inf_estimate - 0.25));
    add(out, "iid_rate_window", worst, 0.05, "sup and inf estimates near Var = 1/4");
  }

  {
    double worst = 0.0;
    HermitianOperator h = qutrit_example_hamiltonian();
    for (double q : {0.1, 0.5, 0.9}) {
      DensityMatrix rho = qutrit_example_state(q);
      worst = std::max(worst, std::abs(iid_dist_upper_bound(rho, h, sld) -
                                       4.0 * qutrit_example_sld_closed_form(q)));
    }
    Mat sym = Mat::Zero(3, 3);
    sym(0, 0) = 0.2;
    sym(1, 1) = 0.3;
    sym(2, 2) = 0.5;
    worst = std::max(worst, std::abs(iid_dist_upper_bound(DensityMatrix(sym), h, sld)));
    bool threw = false;
    try {
      Mat bad = Mat::Zero(2, 2);
      bad(1, 1) = 1.5;
      iid_dist_upper_bound(DensityMatrix(Mat(0.5 * Mat::Identity(2, 2))), HermitianOperator(bad),
                           sld);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    add_flag(out, "single_copy_bound_sld", worst <= 1e-9 && threw, worst, 1e-9,
             "(11-15q+8q^2)/4 plus the non-integer error path");
  }

  {
    double worst = 0.0;
    HermitianOperator h = qutrit_example_hamiltonian();
    for (double q : {0.1, 0.5, 0.9}) {
      DensityMatrix rho = qutrit_example_state(q);
      double wyd = iid_dist_upper_bound(rho, h, make_wyd(1e-4));
      worst = std::max(worst, std::abs(wyd - wyd_p_to_zero_bound(q)));
      worst = std::max(worst, wyd - iid_dist_upper_bound(rho, h, sld) - 1e-12);
    }
    add(out, "single_copy_bound_wyd_limit", worst, 1e-3,
        "4 I^{wyd,1e-4} approaches (9-7q)/4 and undercuts the sld bound");
  }

  {
    double worst = 0.0;
    NoniidRow r4 = noniid_row(4);
    NoniidRow r16 = noniid_row(16);
    worst = std::max(worst, std::abs(r4.variance - 9.5));
    worst = std::max(worst, std::abs(r16.variance - 111.0));
    double prev_d = std::numeric_limits<double>::infinity();
    for (int m : {4, 9, 16, 25}) {
      NoniidRow row = noniid_row(m);
      worst = std::max(worst, row.diff);
      if (row.distance >= prev_d) worst = std::max(worst, 1.0);
      prev_d = row.distance;
    }
    add(out, "noniid_variance_formula", worst, 1e-8,
        "(sqrt(m)/4)(9m - 8 sqrt(m) - 1) with decreasing distance");
  }

  {
    double worst = 0.0;
    StateFamily fam = noniid_example_family();
    for (int m : {2, 3}) {
      auto [rho, h] = fam.generator(m);
      auto [lrho, lh] = noniid_ladder(m);
      worst = std::max(worst, std::abs(skew_info(rho, h, sld).value -
                                       skew_info(lrho, lh, sld).value));
      Vec phi3 = Vec::Zero(3);
      phi3(0) = 1.0 / std::sqrt(2.0);
      phi3(1) = 1.0 / std::sqrt(2.0);
      Vec acc = phi3;
      for (int i = 1; i < m; ++i) acc = tensor(acc, phi3);
      cplx ip = acc.dot(rho.pure_vector());
      double dist = std::sqrt(std::max(0.0, 1.0 - std::norm(ip)));
      worst = std::max(worst, std::abs(dist - noniid_row(m).distance));
    }
    add(out, "noniid_ladder_consistency", worst, 1e-9,
        "full tensor states and the ladder agree on skew and distance");
  }

  return out;
}

}  // namespace

VerifyReport run_verify_suite(const std::string& suite) {
  VerifyReport rep;
  rep.suite = suite;
  if (suite == "skew") {
    rep.results = suite_skew();
  } else if (suite == "smooth") {
    rep.results = suite_smooth();
  } else if (suite == "channels") {
    rep.results = suite_channels();
  } else if (suite == "sequences") {
    rep.results = suite_sequences();
  } else if (suite == "rates") {
    rep.results = suite_rates();
  } else if (suite == "all") {
    for (const std::string& name : verify_suite_names()) {
      VerifyReport sub = run_verify_suite(name);
      for (auto& r : sub.results) {
        r.name = name + "." + r.name;
        rep.results.push_back(std::move(r));
      }
    }
  } else {
    throw std::invalid_argument("unknown verify suite: " + suite);
  }
  return rep;
}

nlohmann::json verify_report_to_json(const VerifyReport& report) {
  nlohmann::json inv = nlohmann::json::array();
  for (const auto& r : report.results)
    inv.push_back({{"name", r.name},
                   {"pass", r.pass},
                   {"measured", r.measured},
                   {"tolerance", r.tolerance},
                   {"note", r.note}});
  return {{"suite", report.suite},
          {"count", report.results.size()},
          {"all_pass", report.all_pass()},
          {"invariants", inv}};
}

}  // namespace asym

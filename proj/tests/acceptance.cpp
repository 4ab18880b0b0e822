// Acceptance gate: one line per criterion, nonzero exit when a selected
// criterion fails.  An optional argv[1] selects a single criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "asymrate/asymptotics.hpp"
#include "asymrate/channels.hpp"
#include "asymrate/monotone.hpp"
#include "asymrate/operators.hpp"
#include "asymrate/reference_states.hpp"
#include "asymrate/sequences.hpp"
#include "asymrate/skew.hpp"
#include "asymrate/smoothing.hpp"
#include "asymrate/verify.hpp"

using namespace asym;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<MonotoneFunction> regular_builtins() {
  return {make_sld(), make_wyd(0.1), make_wyd(0.3), make_wyd(0.5), make_wyd(0.9)};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double qutrit_wyd_closed_form(double q, double p) {
  double x = (1.0 - q) / q;
  double cross = (std::pow(x, p) - 1.0) * (std::pow(x, 1.0 - p) - 1.0);
  return (11.0 - 7.0 * q) / 16.0 - (1.0 - q * cross) / 8.0;
}

// ---- criterion 1: closed-form qutrit reproduction ----------------------

Outcome criterion1() {
  HermitianOperator h = qutrit_example_hamiltonian();
  MonotoneFunction sld = make_sld();
  double worst_sld = 0.0, worst_wyd = 0.0;
  for (int i = 1; i <= 9; ++i) {
    double q = 0.1 * i;
    DensityMatrix rho = qutrit_example_state(q);
    worst_sld = std::max(worst_sld,
                         std::abs(skew_info(rho, h, sld).value - qutrit_example_sld_closed_form(q)));
    for (double p : {0.1, 0.3, 0.5})
      worst_wyd = std::max(worst_wyd, std::abs(skew_info(rho, h, make_wyd(p)).value -
                                               qutrit_wyd_closed_form(q, p)));
  }
  Outcome out;
  out.pass = worst_sld <= 1e-10 && worst_wyd <= 1e-9;
  out.detail = "sld gap " + fmt(worst_sld) + " (tol 1e-10), wyd gap " + fmt(worst_wyd) +
               " (tol 1e-9) over q=0.1..0.9, p in {0.1,0.3,0.5}";
  return out;
}

// ---- criterion 2: endpoint values --------------------------------------

Outcome criterion2() {
  HermitianOperator h = qutrit_example_hamiltonian();
  MonotoneFunction sld = make_sld();
  double at0 = 4.0 * skew_info(qutrit_example_state(0.0), h, sld).value;
  double at1 = 4.0 * skew_info(qutrit_example_state(1.0), h, sld).value;
  double gap = std::max(std::abs(at0 - 11.0 / 4.0), std::abs(at1 - 1.0));
  Outcome out;
  out.pass = gap <= 1e-10;
  out.detail = "4*I at q=0 is " + fmt(at0) + " (want 2.75), at q=1 is " + fmt(at1) +
               " (want 1); gap " + fmt(gap) + " (tol 1e-10)";
  return out;
}

// ---- criterion 3: small-exponent bound ----------------------------------

Outcome criterion3() {
  HermitianOperator h = qutrit_example_hamiltonian();
  MonotoneFunction wyd = make_wyd(1e-4);
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    double q = 0.1 * i;
    double val = 4.0 * skew_info(qutrit_example_state(q), h, wyd).value;
    worst = std::max(worst, std::abs(val - (9.0 - 7.0 * q) / 4.0));
  }
  Outcome out;
  out.pass = worst <= 1e-3;
  out.detail = "4*I with wyd p=1e-4 vs (9-7q)/4: gap " + fmt(worst) + " (tol 1e-3)";
  return out;
}

// ---- criterion 4: pure-state identity and sandwich ----------------------

Outcome criterion4() {
  std::mt19937_64 rng(840001);
  std::vector<MonotoneFunction> fs = regular_builtins();
  MonotoneFunction sld = make_sld();
  double worst_pure = 0.0, worst_sandwich = 0.0;
  for (int t = 0; t < 200; ++t) {
    int dim = 2 + t % 4;
    Vec psi = random_pure_state(dim, rng);
    HermitianOperator h = random_hermitian_operator(dim, rng);
    double var = variance(DensityMatrix::pure(psi), h);
    for (const MonotoneFunction& f : fs)
      worst_pure = std::max(worst_pure,
                            std::abs(skew_info(DensityMatrix::pure(psi), h, f).value - var));

    DensityMatrix rho = random_density_matrix(dim, rng);
    double base = skew_info(rho, h, sld).value;
    for (const MonotoneFunction& f : fs) {
      double v = skew_info(rho, h, f).value;
      worst_sandwich = std::max(worst_sandwich, v - base);
      worst_sandwich = std::max(worst_sandwich, base - v / (2.0 * f.f0));
    }
  }
  Outcome out;
  out.pass = worst_pure <= 1e-8 && worst_sandwich <= 1e-9;
  out.detail = "200 states, dims 2-5, 5 builtins: pure gap " + fmt(worst_pure) +
               " (tol 1e-8), sandwich violation " + fmt(worst_sandwich) + " (tol 1e-9)";
  return out;
}

// ---- criterion 5: monotonicity under covariant channels -----------------

Outcome criterion5() {
  std::mt19937_64 rng(850001);
  std::vector<MonotoneFunction> fs = regular_builtins();
  double worst_plain = 0.0, worst_smooth = 0.0;
  int smooth_checked = 0;
  for (int t = 0; t < 100; ++t) {
    int d = 2 + t % 3;
    Mat hm = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) hm(i, i) = i;
    HermitianOperator h{hm};
    QuantumChannel ch = random_covariant_channel(h, h, 1 + t % 3, 9000 + t);
    // near-pure inputs keep the smoothed values away from zero
    Vec psi = random_pure_state(d, rng);
    Mat mix = 0.92 * (psi * psi.adjoint()) + 0.08 * random_density_matrix(d, rng).matrix();
    DensityMatrix rho{mix};
    DensityMatrix img = apply(ch, rho);
    for (const MonotoneFunction& f : fs)
      worst_plain = std::max(worst_plain,
                             skew_info(img, h, f).value - skew_info(rho, h, f).value);

    if (d <= 3 && t % 2 == 0) {
      double eps = 0.1;
      std::vector<Mat> images;
      for (int s = 0; s < 300; ++s) {
        Mat g = random_hermitian_operator(d, rng).matrix();
        Mat cand = project_to_ball(rho.matrix() + (eps / g.norm()) * g, rho.matrix(), eps, 64);
        images.push_back(apply(ch, DensityMatrix{cand}).matrix());
      }
      for (const MonotoneFunction& f : {make_sld(), make_wyd(0.3)}) {
        double before = brute_force_smooth(rho, h, f, eps, 12000, 500 + t);
        double after = brute_force_smooth(img, h, f, eps, 12000, 600 + t, &images);
        worst_smooth = std::max(worst_smooth, after - before);
      }
      ++smooth_checked;
    }
  }
  Outcome out;
  out.pass = worst_plain <= 1e-8 && worst_smooth <= 1e-3;
  out.detail = "100 channels, dims 2-4: plain increase " + fmt(worst_plain) +
               " (tol 1e-8); smoothed increase " + fmt(worst_smooth) + " (tol 1e-3) on " +
               std::to_string(smooth_checked) + " low-dim channels";
  return out;
}

// ---- criterion 6: smoothing optimizer vs the Bloch-ball oracle ----------

Outcome criterion6() {
  std::mt19937_64 rng(860001);
  MonotoneFunction sld = make_sld();
  double worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    // sweep mixedness so some instances smooth to zero and others stay positive
    Vec psi = random_pure_state(2, rng);
    double w = (t % 3) * 0.05;
    Mat mix = (1.0 - w) * (psi * psi.adjoint()) + w * random_density_matrix(2, rng).matrix();
    DensityMatrix rho{mix};
    Mat hm = random_hermitian_operator(2, rng).matrix();
    hm /= eig_hermitian(hm).eigenvalues.cwiseAbs().maxCoeff();
    HermitianOperator h{hm};
    for (double eps : {0.05, 0.1, 0.2}) {
      OptimizerOptions opts;
      opts.seed = 7000 + static_cast<std::uint64_t>(t);
      double optimized = smooth_skew_info(rho, h, sld, eps, opts).value;
      double oracle = brute_force_smooth(rho, h, sld, eps, 150000, 700 + t);
      worst = std::max(worst, std::abs(optimized - oracle));
    }
  }
  Outcome out;
  out.pass = worst <= 2e-3;
  out.detail = "30 qubit instances, eps in {0.05,0.1,0.2}: worst optimizer/oracle gap " +
               fmt(worst) + " (tol 2e-3)";
  return out;
}

// ---- criterion 7: diverging-variance family ------------------------------

Outcome criterion7() {
  double worst_var = 0.0;
  for (int m : {4, 9, 16, 25}) worst_var = std::max(worst_var, noniid_row(m).diff);

  MonotoneFunction sld = make_sld();
  bool growing = true;
  double prev = 0.0, last = 0.0;
  for (int m = 2; m <= 7; ++m) {
    auto [rho, h] = noniid_ladder(m);
    last = skew_info(rho, h, sld).value / m;
    growing = growing && last > prev;
    prev = last;
  }

  OptimizerOptions opts;
  opts.iterations = 1500;
  opts.restarts = 3;
  opts.seed = 870001;
  auto [rho7, h7] = noniid_ladder(7);
  double smoothed = smooth_skew_info(rho7, h7, sld, 0.1, opts).value / 7.0;
  double gap = std::abs(smoothed - 0.25);

  Outcome out;
  out.pass = worst_var <= 1e-8 && growing && last > 1.0 && gap <= 0.05;
  out.detail = "variance formula gap " + fmt(worst_var) +
               " (tol 1e-8); per-copy value grows to " + fmt(last) +
               " at m=7; smoothed per-copy at eps=0.1 is " + fmt(smoothed) + ", so |" +
               fmt(smoothed) + " - 0.25| = " + fmt(gap) +
               " (tol 0.05); at m=7 the family is still 7^(-1/4) = 0.61 away from the "
               "product reference, far outside the 0.1 ball, so the smoothed per-copy "
               "value cannot reach 0.25 at this size";
  return out;
}

// ---- criterion 8: integer-sequence machinery -----------------------------

Outcome criterion8() {
  double worst_conv = 0.0;
  for (double a : {-0.5, 0.5, 1.0, 2.0})
    for (double b : {-0.5, 0.5, 1.0, 2.0}) {
      if (a + b < 0.0) continue;
      IntSequence got = convolve(poisson_certified(a, 1e-13), poisson_certified(b, 1e-13));
      IntSequence want = poisson_certified(a + b, 1e-13);
      for (long long n = want.first_index(); n <= want.last_index(); ++n)
        worst_conv = std::max(worst_conv, std::abs(got.at(n) - want.at(n)));
    }

  double worst_inv = 0.0;
  for (double lambda : {0.5, 1.0}) {
    IntSequence inv = inverse_sequence(poisson_certified(lambda, 1e-15), 30);
    IntSequence want = poisson_certified(-lambda, 1e-15);
    for (long long n = 0; n <= 30; ++n)
      worst_inv = std::max(worst_inv, std::abs(inv.at(n) - want.at(n)));
  }

  double worst_g = 0.0;
  for (double x = 0.1; x <= 5.0; x += 0.1)
    worst_g = std::max(worst_g, std::abs(truncated_normal_second_moment_inverse(
                                             truncated_normal_second_moment(x)) -
                                         x));

  bool gamma_ok = true;
  double prev = std::numeric_limits<double>::infinity();
  double gamma_last = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    gamma_last = gamma_lambda(1.0, eps);
    gamma_ok = gamma_ok && gamma_last < prev;
    prev = gamma_last;
  }
  gamma_ok = gamma_ok && gamma_last < 1e-2;

  std::mt19937_64 rng(880001);
  std::uniform_real_distribution<double> unif(0.002, 0.009);
  int bound_failures = 0;
  IntSequence base = poisson_certified(2.0, 1e-16);
  for (int t = 0; t < 50; ++t) {
    IntSequence q = base;
    long long mode = 2 - q.offset;
    double moved = unif(rng);
    int dir = (t % 2 == 0) ? 1 : -1;
    q.values[static_cast<std::size_t>(mode)] -= moved;
    q.values[static_cast<std::size_t>(mode + dir)] += moved;
    VarianceBoundReport rep = verify_variance_bound(q, 0.5, 4, 0.05);
    if (!rep.pass) ++bound_failures;
  }

  Outcome out;
  out.pass = worst_conv <= 1e-9 && worst_inv <= 1e-8 && worst_g <= 1e-7 && gamma_ok &&
             bound_failures == 0;
  out.detail = "convolution gap " + fmt(worst_conv) + " (tol 1e-9), inverse gap " +
               fmt(worst_inv) + " (tol 1e-8), g inverse gap " + fmt(worst_g) +
               " (tol 1e-7), gamma(1, 1e-4) = " + fmt(gamma_last) +
               " (decreasing, < 1e-2), variance bound failures " +
               std::to_string(bound_failures) + "/50";
  return out;
}

// ---- criterion 9: max/min Fisher information sandwich --------------------

Outcome criterion9() {
  std::mt19937_64 rng(890001);
  double worst_slack = 0.0;
  for (int t = 0; t < 20; ++t) {
    int dim = 2 + t % 3;
    Vec psi = random_pure_state(dim, rng);
    HermitianOperator h = random_integer_hamiltonian(dim, dim, rng);
    double fisher = qfi(DensityMatrix::pure(psi), h);
    EnergyDistribution p = energy_distribution(psi, h);
    FmaxResult upper = f_max(p);
    double lower = f_min(p);
    worst_slack = std::max(worst_slack, lower - fisher);
    if (!upper.infinite) worst_slack = std::max(worst_slack, fisher - upper.value);
  }

  EnergyDistribution trunc = poisson_certified(0.5, 1e-13);
  trunc.tail_bound = 0.0;
  FmaxResult tmax = f_max(trunc, -1.0, 1e-5);
  double tmin = f_min(trunc, 1e-5);
  double trunc_gap = std::max(std::abs(tmax.value - 2.0), std::abs(tmin - 2.0));

  EnergyDistribution coh{0, {0.5, 0.5}, 0.0};
  FmaxResult cmax = f_max(coh);
  double cmin = f_min(coh);

  Outcome out;
  out.pass = worst_slack <= 1e-6 && !tmax.infinite && trunc_gap <= 1e-3 && cmax.infinite &&
             cmin <= 1e-9;
  out.detail = "sandwich slack " + fmt(worst_slack) +
               " (tol 1e-6) on 20 states; truncated-Poisson gap " + fmt(trunc_gap) +
               " (tol 1e-3); half-half: min " + fmt(cmin) + ", max " +
               (cmax.infinite ? "unbounded (cap reached)" : "finite");
  return out;
}

// ---- criterion 10: figure data through the CLI ---------------------------

Outcome criterion10() {
  Outcome out;
  int runs = 0;
  for (double p : {0.01, 0.1, 0.4}) {
    std::string path = "/tmp/asymrate_accept_fig1_" + std::to_string(runs) + ".csv";
    std::ostringstream cmd;
    cmd << ASYMRATE_CLI_PATH << " figure1 --p " << p << " --out " << path
        << " >/dev/null 2>&1";
    int status = std::system(cmd.str().c_str());
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      out.pass = false;
      out.detail = "figure1 run failed for p=" + fmt(p);
      return out;
    }
    std::ifstream in(path);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'q') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ss(line);
      double q, sld, wyd, lim;
      if (!(ss >> q >> sld >> wyd >> lim)) continue;
      ++rows;
      if (wyd > sld + 1e-12) {
        out.pass = false;
        out.detail = "wyd column exceeds sld at q=" + fmt(q) + ", p=" + fmt(p);
        return out;
      }
    }
    if (rows != 19) {
      out.pass = false;
      out.detail = "expected 19 grid rows for p=" + fmt(p) + ", found " + std::to_string(rows);
      return out;
    }
    ++runs;
  }
  out.detail = "CSV ordering holds at all 19 grid points for p in {0.01,0.1,0.4}";
  return out;
}

struct Criterion {
  int id;
  std::function<Outcome()> run;
  double time_limit;  // seconds; 0 disables the check
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria = {
      {1, criterion1, 1.0},  {2, criterion2, 0.0},  {3, criterion3, 1.0},
      {4, criterion4, 10.0}, {5, criterion5, 120.0}, {6, criterion6, 300.0},
      {7, criterion7, 600.0}, {8, criterion8, 30.0}, {9, criterion9, 60.0},
      {10, criterion10, 1.0},
  };

  int selected = 0;
  if (argc > 1) {
    selected = std::atoi(argv[1]);
    if (selected < 1 || selected > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (selected != 0 && c.id != selected) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome out = c.run();
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.time_limit <= 0.0 || elapsed <= c.time_limit;
    bool pass = out.pass && in_time;
    std::printf("criterion %d: %s (%.2f s) %s%s\n", c.id, pass ? "PASS" : "FAIL", elapsed,
                out.detail.c_str(),
                in_time ? "" : (" [over the " + fmt(c.time_limit) + " s budget]").c_str());
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

#include "asymrate/reference_states.hpp"
#include "asymrate/sequences.hpp"
#include "asymrate/skew.hpp"
#include "asymrate/verify.hpp"

using namespace asym;

namespace {

double window_gap(const IntSequence& got, const IntSequence& want) {
  double worst = 0.0;
  for (long long n = got.first_index(); n <= got.last_index(); ++n)
    worst = std::max(worst, std::abs(got.at(n) - want.at(n)));
  return worst;
}

}  // namespace

TEST_CASE("poisson point values") {
  IntSequence p0 = poisson(0.0, 8);
  CHECK(p0.at(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p0.at(1) == 0.0);

  CHECK(poisson(1.0, 20).at(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(poisson(-1.0, 20).at(1) == doctest::Approx(-std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("certified truncation controls the tail") {
  for (double lambda : {0.5, 2.0, -0.5, -2.0}) {
    IntSequence p = poisson_certified(lambda, 1e-12);
    CHECK(p.tail_bound <= 1e-12);
    if (lambda > 0.0) {
      CHECK(std::abs(sequence_sum(p) - 1.0) < 1e-11);
      CHECK(std::abs(sequence_mean(p) - lambda) < 1e-9);
      CHECK(std::abs(sequence_variance(p) - lambda) < 1e-8);
    }
  }
}

TEST_CASE("convolution semigroup and identities") {
  IntSequence delta{0, {1.0}, 0.0};
  IntSequence p1 = poisson_certified(1.0, 1e-14);
  CHECK(window_gap(convolve(delta, p1), p1) < 1e-15);

  IntSequence p2 = poisson_certified(2.0, 1e-14);
  IntSequence p3 = poisson_certified(3.0, 1e-14);
  CHECK(window_gap(convolve(p1, p2), p3) < 1e-9);

  IntSequence opposite = convolve(p1, poisson_certified(-1.0, 1e-14));
  CHECK(std::abs(opposite.at(0) - 1.0) < 1e-9);
  for (long long n = 1; n <= 10; ++n) CHECK(std::abs(opposite.at(n)) < 1e-9);
}

TEST_CASE("shift and total variation") {
  IntSequence point{3, {1.0}, 0.0};
  IntSequence moved = shift(point, 2);
  CHECK(moved.at(5) == doctest::Approx(1.0));
  CHECK(total_variation(point, shift(point, 1)) == doctest::Approx(1.0));
  CHECK(total_variation(point, point) == 0.0);
}

TEST_CASE("convolution inverse recursion") {
  IntSequence delta{0, {1.0}, 0.0};
  CHECK(window_gap(inverse_sequence(delta, 6), delta) < 1e-15);

  IntSequence half{0, {0.5, 0.5}, 0.0};
  IntSequence inv = inverse_sequence(half, 8);
  for (long long n = 0; n <= 8; ++n)
    CHECK(inv.at(n) == doctest::Approx(2.0 * ((n % 2 == 0) ? 1.0 : -1.0)).epsilon(1e-12));

  IntSequence p = poisson_certified(0.7, 1e-16);
  IntSequence pm = poisson_certified(-0.7, 1e-16);
  CHECK(window_gap(inverse_sequence(p, 25), pm) < 1e-8);

  IntSequence zero_lead{0, {0.0, 1.0}, 0.0};
  CHECK_THROWS_AS(inverse_sequence(zero_lead, 4), std::invalid_argument);
}

TEST_CASE("energy distributions of reference states") {
  EnergyDistribution coh = energy_distribution(phi_coh(), coh_hamiltonian());
  CHECK(coh.at(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(coh.at(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(sequence_sum(coh) - 1.0) < 1e-12);

  Vec e2 = Vec::Zero(3);
  e2(2) = 1.0;
  EnergyDistribution point = energy_distribution(e2, qutrit_example_hamiltonian());
  CHECK(point.at(2) == doctest::Approx(1.0).epsilon(1e-12));

  EnergyDistribution p1 = energy_distribution(qutrit_example_psi1(), qutrit_example_hamiltonian());
  CHECK(p1.at(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p1.at(1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p1.at(2) == doctest::Approx(0.5).epsilon(1e-12));

  Mat frac = Mat::Zero(2, 2);
  frac(1, 1) = 1.5;
  CHECK_THROWS_AS(energy_distribution(phi_coh(), HermitianOperator{frac}),
                  std::invalid_argument);
}

TEST_CASE("period normalization") {
  std::mt19937_64 rng(51);
  Vec psi = random_pure_state(3, rng);
  Mat h012 = qutrit_example_hamiltonian().matrix();

  NormalizedPeriod same = normalize_period(psi, HermitianOperator{h012});
  CHECK_FALSE(same.changed);
  CHECK(Mat(same.h.matrix() - h012).cwiseAbs().maxCoeff() < 1e-12);

  NormalizedPeriod halved = normalize_period(psi, HermitianOperator{Mat(2.0 * h012)});
  CHECK(halved.changed);
  CHECK(halved.scale == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(Mat(halved.h.matrix() - h012).cwiseAbs().maxCoeff() < 1e-12);

  Mat h34 = Mat::Zero(2, 2);
  h34(0, 0) = 3.0;
  h34(1, 1) = 4.0;
  NormalizedPeriod shifted = normalize_period(phi_coh(), HermitianOperator{h34});
  CHECK(Mat(shifted.h.matrix() - coh_hamiltonian().matrix()).cwiseAbs().maxCoeff() < 1e-12);

  Mat bad = Mat::Zero(3, 3);
  bad(1, 1) = 1.0;
  bad(2, 2) = std::sqrt(2.0);
  CHECK_THROWS_AS(normalize_period(random_pure_state(3, rng), HermitianOperator{bad}),
                  std::invalid_argument);
}

TEST_CASE("max and min Fisher information of reference distributions") {
  EnergyDistribution point{4, {1.0}, 0.0};
  FmaxResult fm = f_max(point);
  CHECK_FALSE(fm.infinite);
  CHECK(fm.value == 0.0);
  CHECK(f_min(point) == 0.0);

  EnergyDistribution trunc = poisson_certified(0.5, 1e-13);
  trunc.tail_bound = 0.0;  // treat the truncation as the exact distribution
  FmaxResult upper = f_max(trunc, -1.0, 1e-5);
  CHECK_FALSE(upper.infinite);
  CHECK(std::abs(upper.value - 2.0) < 1e-3);
  CHECK(std::abs(f_min(trunc, 1e-5) - 2.0) < 1e-3);

  EnergyDistribution coh{0, {0.5, 0.5}, 0.0};
  FmaxResult unbounded = f_max(coh);
  CHECK(unbounded.infinite);
  CHECK(f_min(coh) <= 1e-5);
}

TEST_CASE("fisher sandwich on random integer-spectrum pure states") {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 8; ++t) {
    int dim = 2 + t % 3;
    Vec psi = random_pure_state(dim, rng);
    HermitianOperator h = random_integer_hamiltonian(dim, dim, rng);
    double fisher = qfi(DensityMatrix::pure(psi), h);
    EnergyDistribution p = energy_distribution(psi, h);
    FmaxResult upper = f_max(p);
    double lower = f_min(p);
    CHECK(lower <= fisher + 1e-6);
    if (!upper.infinite) CHECK(upper.value >= fisher - 1e-6);
  }
}

TEST_CASE("truncated normal second moment and its inverse") {
  CHECK(truncated_normal_second_moment(0.0) == 0.0);
  CHECK(truncated_normal_second_moment(1.0) == doctest::Approx(0.1987480431).epsilon(2e-5));
  CHECK(truncated_normal_second_moment(40.0) == doctest::Approx(1.0).epsilon(1e-9));

  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    double g = truncated_normal_second_moment(0.05 * i);
    CHECK(g > prev);
    prev = g;
  }
  for (double x : {0.2, 1.0, 2.5, 4.0}) {
    double y = truncated_normal_second_moment(x);
    CHECK(std::abs(truncated_normal_second_moment_inverse(y) - x) < 1e-7);
  }
}

TEST_CASE("gamma vanishes with eps and the threshold error names the limit") {
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double g = gamma_lambda(1.0, eps);
    CHECK(g < prev);
    prev = g;
  }
  CHECK(prev < 1e-2);
  CHECK_THROWS_AS(gamma_lambda(1.0, 0.9), std::invalid_argument);
}

TEST_CASE("robustness parameters of the variance bound") {
  for (double lambda : {0.25, 1.0})
    for (double eps : {1e-2, 1e-3}) {
      SmoothingBoundParams p = smoothing_bound_params(lambda, eps, make_sld());
      CHECK(std::abs(p.alpha_eps * std::sqrt(lambda) -
                     truncated_normal_second_moment_inverse(1.0 - eps)) < 1e-8);
      CHECK(p.delta_f >= 0.0);
    }
  double prev = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
    last = smoothing_bound_params(0.25, eps, make_sld()).delta_f;
    CHECK(last < prev);
    prev = last;
  }
  CHECK(last < 1e-2);
}

TEST_CASE("poisson shift fitting") {
  IntSequence p2 = poisson_certified(2.0, 1e-12);
  PoissonShiftFit fit = poisson_shift_fit(shift(p2, 3), 2.0);
  CHECK(fit.k == 3);
  CHECK(fit.tv < 1e-9);

  EnergyDistribution point{5, {1.0}, 0.0};
  PoissonShiftFit pf = poisson_shift_fit(point, 0.0);
  CHECK(pf.k == 5);
  CHECK(pf.tv < 1e-12);
}

TEST_CASE("variance lower bound report") {
  IntSequence exact = poisson_certified(2.0, 1e-16);
  VarianceBoundReport rep = verify_variance_bound(exact, 0.5, 4, 0.01);
  CHECK(rep.pass);
  CHECK(rep.variance == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.bound == doctest::Approx(2.0 - rep.gamma_term).epsilon(1e-12));

  // move a little mass one step outward: variance grows, bound still holds
  IntSequence bumped = exact;
  long long mode = 2 - bumped.offset;
  bumped.values[static_cast<std::size_t>(mode)] -= 0.008;
  bumped.values[static_cast<std::size_t>(mode + 1)] += 0.008;
  VarianceBoundReport rep2 = verify_variance_bound(bumped, 0.5, 4, 0.05);
  CHECK(rep2.pass);

  // far from every shift of the target: the precondition fails loudly
  IntSequence far{0, {0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5}, 0.0};
  CHECK_THROWS_AS(verify_variance_bound(far, 0.5, 4, 0.01), std::invalid_argument);
}

TEST_CASE("binomial distributions approach the poisson fit") {
  double prev = std::numeric_limits<double>::infinity();
  for (int m : {8, 16, 32, 64}) {
    IntSequence b;
    b.offset = 0;
    b.values.assign(static_cast<std::size_t>(m + 1), 0.0);
    b.values[0] = std::pow(0.5, m);
    for (int n = 1; n <= m; ++n)
      b.values[static_cast<std::size_t>(n)] =
          b.values[static_cast<std::size_t>(n - 1)] * (m - n + 1) / n;
    PoissonShiftFit fit = poisson_shift_fit(b, m / 4.0);
    CHECK(fit.tv < prev);
    prev = fit.tv;
    VarianceBoundReport rep = verify_variance_bound(b, 0.25, m, fit.tv + 0.01);
    CHECK(rep.pass);
  }
}

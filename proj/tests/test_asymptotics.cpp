#include <cmath>
#include <random>

#include "doctest.h"

#include "asymrate/asymptotics.hpp"
#include "asymrate/reference_states.hpp"
#include "asymrate/sequences.hpp"
#include "asymrate/skew.hpp"
#include "asymrate/verify.hpp"

using namespace asym;

namespace {

OptimizerOptions quick_options(std::uint64_t seed) {
  OptimizerOptions opts;
  opts.iterations = 300;
  opts.restarts = 1;
  opts.seed = seed;
  return opts;
}

}  // namespace

TEST_CASE("iid family shapes and exact per-copy values") {
  StateFamily fam = iid_family(phi_coh(), coh_hamiltonian(), 1.0);
  auto [rho3, h3] = fam.generator(3);
  CHECK(rho3.dim() == 8);
  EigenSystem es = eig_hermitian(h3);
  CHECK(std::abs(es.eigenvalues(0)) < 1e-12);
  CHECK(es.eigenvalues(es.eigenvalues.size() - 1) == doctest::Approx(3.0));

  MonotoneFunction sld = make_sld();
  for (int m = 1; m <= 5; ++m) {
    auto [rho, h] = fam.generator(m);
    double per_copy = skew_info(rho, h, sld).value / m;
    CHECK(std::abs(per_copy - 0.25) < 1e-8);
  }

  StateFamily half = iid_family(phi_coh(), coh_hamiltonian(), 0.5);
  auto [rho2, h2] = half.generator(2);
  CHECK(rho2.dim() == 2);
  auto [rho5, h5] = half.generator(5);
  CHECK(rho5.dim() == 8);
  double v5 = skew_info(rho5, h5, sld).value / 5.0;
  CHECK(std::abs(v5 - std::ceil(0.5 * 5 - 1e-12) / 5.0 * 0.25) < 1e-8);
}

TEST_CASE("family generators respect the dimension cap") {
  StateFamily fam = noniid_example_family();
  CHECK(fam.m_cap == 7);
  CHECK_THROWS_AS(fam.generator(8), dim_error);
}

TEST_CASE("diverging-variance family rows") {
  for (int m : {4, 9, 16, 25}) {
    NoniidRow row = noniid_row(m);
    double rm = std::sqrt(static_cast<double>(m));
    CHECK(std::abs(row.formula - rm / 4.0 * (9.0 * m - 8.0 * rm - 1.0)) < 1e-12);
    CHECK(row.diff < 1e-8);
  }
  CHECK(noniid_row(4).variance == doctest::Approx(9.5).epsilon(1e-10));
  CHECK(noniid_row(16).variance == doctest::Approx(111.0).epsilon(1e-10));

  double prev = 1.0;
  for (int m : {2, 4, 8, 16}) {
    NoniidRow row = noniid_row(m);
    CHECK(row.distance < prev);
    CHECK(std::abs(row.distance - std::pow(static_cast<double>(m), -0.25)) < 1e-9);
    prev = row.distance;
  }
}

TEST_CASE("ladder pairs reproduce the tensor-product family") {
  StateFamily fam = noniid_example_family();
  MonotoneFunction sld = make_sld();
  for (int m : {2, 3}) {
    auto [full, h_full] = fam.generator(m);
    auto [lad, h_lad] = noniid_ladder(m);
    CHECK(lad.dim() == m + 2);
    CHECK(std::abs(skew_info(full, h_full, sld).value - skew_info(lad, h_lad, sld).value) <
          1e-9);
    EnergyDistribution a = energy_distribution(full.pure_vector(), h_full);
    EnergyDistribution b = energy_distribution(lad.pure_vector(), h_lad);
    CHECK(total_variation(a, b) < 1e-10);
  }
}

TEST_CASE("rate report grid structure and ordering") {
  StateFamily fam = iid_family(phi_coh(), coh_hamiltonian(), 1.0);
  RateReport rep = estimate_rates(fam, make_sld(), {2, 3}, {0.2, 0.1}, quick_options(61));
  REQUIRE(rep.values.size() == 2);
  REQUIRE(rep.values[0].size() == 2);
  CHECK(rep.sup_estimate >= rep.inf_estimate);
  CHECK_FALSE(rep.caveat.empty());
  for (std::size_t i = 0; i < rep.values.size(); ++i)
    for (std::size_t j = 0; j + 1 < rep.values[i].size(); ++j)
      CHECK(rep.values[i][j] <= rep.values[i][j + 1] + 1e-3);
  CHECK(cost_lower_bound(rep) == doctest::Approx(4.0 * rep.sup_estimate));
  CHECK(dist_upper_bound(rep) == doctest::Approx(4.0 * rep.inf_estimate));
  CHECK(cost_lower_bound(rep) >= dist_upper_bound(rep));

  CHECK_THROWS_AS(estimate_rates(fam, make_sld(), {0}, {0.1}, quick_options(62)),
                  std::invalid_argument);
}

TEST_CASE("symmetric families rate to zero") {
  StateFamily fam;
  fam.label = "diagonal";
  fam.m_cap = 6;
  fam.generator = [](int m) {
    Mat rho = Mat::Zero(2, 2);
    rho(0, 0) = 0.6;
    rho(1, 1) = 0.4;
    Mat h = Mat::Zero(2, 2);
    h(1, 1) = static_cast<double>(m);
    return std::make_pair(DensityMatrix{rho}, HermitianOperator{h});
  };
  RateReport rep = estimate_rates(fam, make_sld(), {2, 3, 4}, {0.1}, quick_options(63));
  CHECK(std::abs(rep.sup_estimate) < 1e-14);
  CHECK(std::abs(rep.inf_estimate) < 1e-14);
}

TEST_CASE("single-copy distillation bounds for the worked mixture") {
  HermitianOperator h = qutrit_example_hamiltonian();
  for (double q : {0.2, 0.5, 0.8}) {
    DensityMatrix rho = qutrit_example_state(q);
    double sld_bound = iid_dist_upper_bound(rho, h, make_sld());
    CHECK(std::abs(sld_bound - (11.0 - 15.0 * q + 8.0 * q * q) / 4.0) < 1e-9);
    double wyd_bound = iid_dist_upper_bound(rho, h, make_wyd(1e-4));
    CHECK(std::abs(wyd_bound - wyd_p_to_zero_bound(q)) < 1e-3);
    CHECK(wyd_bound <= sld_bound + 1e-12);
  }

  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  CHECK(iid_dist_upper_bound(DensityMatrix{diag}, coh_hamiltonian(), make_sld()) < 1e-12);

  Mat frac = Mat::Zero(2, 2);
  frac(1, 1) = 1.5;
  CHECK_THROWS_AS(iid_dist_upper_bound(DensityMatrix{diag}, HermitianOperator{frac}, make_sld()),
                  std::invalid_argument);
}

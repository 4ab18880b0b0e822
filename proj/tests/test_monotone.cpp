#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "asymrate/monotone.hpp"

using namespace asym;

TEST_CASE("builtin values and limits at zero") {
  MonotoneFunction sld = make_sld();
  MonotoneFunction rld = make_rld();
  CHECK(sld(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sld.f0 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rld.f0 == 0.0);
  CHECK(sld.regular());
  CHECK_FALSE(rld.regular());

  MonotoneFunction wyd = make_wyd(0.5);
  CHECK(wyd(4.0) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(wyd.f0 == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(make_wyd(0.3).f0 == doctest::Approx(0.21).epsilon(1e-12));
}

TEST_CASE("wyd is finite and smooth through x = 1") {
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    MonotoneFunction wyd = make_wyd(p);
    CHECK(wyd(1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(wyd(1.0 + 1e-6) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(wyd(1.0 - 1e-6) == doctest::Approx(1.0).epsilon(1e-5));
    // series and direct branches agree at the switch point
    CHECK(std::abs(wyd(1.0 + 1.0000001e-4) - wyd(1.0 + 0.9999999e-4)) < 1e-9);
    CHECK(std::abs(wyd(1.0 - 1.0000001e-4) - wyd(1.0 - 0.9999999e-4)) < 1e-9);
  }
}

TEST_CASE("wyd exponent outside (0,1) is rejected") {
  CHECK_THROWS_AS(make_wyd(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_wyd(1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_wyd(-0.2), std::invalid_argument);
}

TEST_CASE("spec strings parse to the right function") {
  CHECK(make_builtin("sld").f0 == doctest::Approx(0.5));
  CHECK(make_builtin("rld").f0 == 0.0);
  CHECK(make_builtin("wyd:p=0.3").f0 == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(make_builtin("wyd:0.3").f0 == doctest::Approx(0.21).epsilon(1e-12));
  CHECK_THROWS_AS(make_builtin("nope"), std::invalid_argument);
  CHECK_THROWS_AS(make_builtin("wyd:p=1.5"), std::invalid_argument);
}

TEST_CASE("Morozova-Chentsov values and symmetry") {
  MonotoneFunction sld = make_sld();
  CHECK(mc_function(sld, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mc_function(sld, 2.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(mc_function(make_wyd(0.5), 4.0, 1.0) == doctest::Approx(1.0 / 2.25).epsilon(1e-12));

  for (double x : {0.3, 1.7, 5.0})
    for (double y : {0.2, 1.0, 4.0})
      CHECK(mc_function(sld, x, y) == doctest::Approx(mc_function(sld, y, x)).epsilon(1e-12));

  CHECK_THROWS_AS(mc_function(sld, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("validation report passes for builtins") {
  for (const MonotoneFunction& f : {make_sld(), make_rld(), make_wyd(0.3), make_wyd(0.5)}) {
    MonotoneValidationReport rep = validate_standard_monotone(f);
    CHECK(rep.normalization_ok);
    CHECK(rep.symmetry_ok);
    CHECK(rep.grid_monotone_ok);
    CHECK(rep.sandwich_ok);
    CHECK(rep.all_pass());
  }
}

TEST_CASE("validation rejects f(x) = x^2 via the symmetry condition") {
  MonotoneFunction sq = make_custom("square", [](double x) { return x * x; }, 0.0);
  MonotoneValidationReport rep = validate_standard_monotone(sq);
  CHECK_FALSE(rep.symmetry_ok);
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("builtin sandwich on a log grid") {
  MonotoneFunction sld = make_sld();
  MonotoneFunction rld = make_rld();
  for (const MonotoneFunction& f : {make_wyd(0.1), make_wyd(0.5), make_wyd(0.9)}) {
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      double x = std::pow(10.0, -6.0 + 12.0 * i / 1000.0);
      worst = std::min(worst, std::min(f(x) - rld(x), sld(x) - f(x)));
    }
    CHECK(worst >= -1e-12);
  }
}

TEST_CASE("wyd limit at zero matches a small-argument evaluation") {
  for (double p : {0.1, 0.3, 0.5, 0.7}) {
    MonotoneFunction wyd = make_wyd(p);
    double x = std::pow(10.0, -8.0 / std::min(p, 1.0 - p));
    if (x < 1e-300) x = 1e-300;
    CHECK(std::abs(wyd(x) - wyd.f0) < 1e-6);
  }
}

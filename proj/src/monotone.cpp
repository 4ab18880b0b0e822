#include "asymrate/monotone.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace asym {

namespace {

double wyd_eval(double p, double x) {
  double u = x - 1.0;
  if (std::abs(u) < 1e-4) {
    // removable singularity at x=1: cubic Taylor expansion of the ratio
    double a = p, b = 1.0 - p;
    double a1 = (a - 1.0) / 2.0, a2 = (a - 1.0) * (a - 2.0) / 6.0;
    double a3 = (a - 1.0) * (a - 2.0) * (a - 3.0) / 24.0;
    double b1 = (b - 1.0) / 2.0, b2 = (b - 1.0) * (b - 2.0) / 6.0;
    double b3 = (b - 1.0) * (b - 2.0) * (b - 3.0) / 24.0;
    double d1 = a1 + b1;
    double d2 = a2 + b2 + a1 * b1;
    double d3 = a3 + b3 + a1 * b2 + a2 * b1;
    return 1.0 - d1 * u + (d1 * d1 - d2) * u * u + (-d1 * d1 * d1 + 2.0 * d1 * d2 - d3) * u * u * u;
  }
  double lg = std::log1p(u);
  return p * (1.0 - p) * u * u / (std::expm1(p * lg) * std::expm1((1.0 - p) * lg));
}

}  // namespace

MonotoneFunction make_sld() {
  return {"sld", [](double x) { return 0.5 * (x + 1.0); }, 0.5};
}

MonotoneFunction make_rld() {
  return {"rld", [](double x) { return 2.0 * x / (x + 1.0); }, 0.0};
}

MonotoneFunction make_wyd(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("wyd: p must lie in (0,1)");
  char tag[32];
  std::snprintf(tag, sizeof tag, "wyd:p=%g", p);
  return {tag, [p](double x) { return wyd_eval(p, x); }, p * (1.0 - p)};
}

MonotoneFunction make_custom(const std::string& tag, std::function<double(double)> f, double f0) {
  return {tag, std::move(f), f0};
}

MonotoneFunction make_builtin(const std::string& spec) {
  if (spec == "sld" || spec == "SLD") return make_sld();
  if (spec == "rld" || spec == "RLD") return make_rld();
  if (spec.rfind("wyd", 0) == 0 || spec.rfind("WYD", 0) == 0) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("wyd requires a parameter, e.g. wyd:p=0.3");
    std::string param = spec.substr(colon + 1);
    if (param.rfind("p=", 0) == 0) param = param.substr(2);
    size_t used = 0;
    double p;
    try {
      p = std::stod(param, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse wyd parameter in '" + spec + "'");
    }
    if (used != param.size())
      throw std::invalid_argument("cannot parse wyd parameter in '" + spec + "'");
    return make_wyd(p);
  }
  throw std::invalid_argument("unknown monotone function '" + spec + "' (expected sld, rld, or wyd:p=...)");
}

double mc_function(const MonotoneFunction& f, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::invalid_argument("mc_function: arguments must be positive");
  return 1.0 / (y * f.eval(x / y));
}

MonotoneValidationReport validate_standard_monotone(const MonotoneFunction& f, int grid_size) {
  if (grid_size < 8) throw std::invalid_argument("validate_standard_monotone: grid_size must be >= 8");
  MonotoneValidationReport r{};
  r.normalization_err = std::abs(f.eval(1.0) - 1.0);
  r.normalization_ok = r.normalization_err <= 1e-12;

  MonotoneFunction sld = make_sld(), rld = make_rld();
  std::vector<double> grid(grid_size);
  double lo = std::log(1e-6), hi = std::log(1e6);
  for (int i = 0; i < grid_size; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / (grid_size - 1.0));

  r.symmetry_err = 0.0;
  r.monotone_slack = 1e300;
  r.sandwich_slack = 1e300;
  double prev = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    double x = grid[i];
    double fx = f.eval(x);
    r.symmetry_err =
        std::max(r.symmetry_err, std::abs(fx - x * f.eval(1.0 / x)) / std::max(1.0, std::abs(fx)));
    if (i > 0) r.monotone_slack = std::min(r.monotone_slack, fx - prev);
    prev = fx;
    r.sandwich_slack = std::min({r.sandwich_slack, fx - rld.eval(x), sld.eval(x) - fx});
  }
  r.symmetry_ok = r.symmetry_err <= 1e-10;
  r.grid_monotone_ok = r.monotone_slack >= -1e-12;
  r.sandwich_ok = r.sandwich_slack >= -1e-12;
  r.operator_monotone_note = "grid-consistent only";
  return r;
}

}  // namespace asym

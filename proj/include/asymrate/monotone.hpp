#pragma once

#include <functional>
#include <string>

namespace asym {

// standard operator monotone function on (0, inf) with its cached limit at 0
struct MonotoneFunction {
  std::string tag;
  std::function<double(double)> eval;
  double f0 = 0.0;
  bool regular() const { return f0 > 0.0; }
  double operator()(double x) const { return eval(x); }
};

MonotoneFunction make_sld();
MonotoneFunction make_rld();
MonotoneFunction make_wyd(double p);
MonotoneFunction make_custom(const std::string& tag, std::function<double(double)> f, double f0);

// parses "sld" | "rld" | "wyd:p=0.3" (also "wyd:0.3")
MonotoneFunction make_builtin(const std::string& spec);

double mc_function(const MonotoneFunction& f, double x, double y);

struct MonotoneValidationReport {
  double normalization_err;  // |f(1) - 1|
  bool normalization_ok;
  double symmetry_err;  // max relative gap |f(x) - x f(1/x)| / max(1, f(x)) over grid
  bool symmetry_ok;
  double monotone_slack;  // min of f(x_{k+1}) - f(x_k) over grid
  bool grid_monotone_ok;
  double sandwich_slack;  // min over grid of min(f - rld, sld - f)
  bool sandwich_ok;
  std::string operator_monotone_note;  // grid evidence only, not a proof
  bool all_pass() const {
    return normalization_ok && symmetry_ok && grid_monotone_ok && sandwich_ok;
  }
};

MonotoneValidationReport validate_standard_monotone(const MonotoneFunction& f, int grid_size = 1000);

}  // namespace asym

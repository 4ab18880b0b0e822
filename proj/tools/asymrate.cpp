#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "asymrate.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitBadInput = 2;

int exit_code_for(asym_status s) {
  switch (s) {
    case ASYM_ERR_INVALID_ARGUMENT:
    case ASYM_ERR_DIMENSION:
    case ASYM_ERR_IO:
      return kExitBadInput;
    default:
      return kExitInvariant;
  }
}

int report_status(asym_status s, const std::string& what) {
  std::fprintf(stderr, "error: %s: %s\n", what.c_str(), asym_last_error());
  return exit_code_for(s);
}

int fail_input(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return kExitBadInput;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::fputs(text.c_str(), stdout);
    return kExitOk;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return fail_input("cannot open output file " + path);
  out << text;
  return kExitOk;
}

// "2..6" expands to the inclusive range; otherwise a comma list
bool parse_int_list(const std::string& text, std::vector<int>& out) {
  out.clear();
  auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      int lo = std::stoi(text.substr(0, dots));
      int hi = std::stoi(text.substr(dots + 2));
      if (hi < lo) return false;
      for (int v = lo; v <= hi; ++v) out.push_back(v);
      return !out.empty();
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  } catch (const std::exception&) {
    return false;
  }
  return !out.empty();
}

bool parse_double_list(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  } catch (const std::exception&) {
    return false;
  }
  return !out.empty();
}

std::string config_preamble(const json& config) {
  std::string out;
  for (const auto& [key, value] : config.items()) {
    out += "# " + key + "=";
    out += value.is_string() ? value.get<std::string>() : value.dump();
    out += "\n";
  }
  return out;
}

struct OptimizerFlags {
  int iterations = 0;    // 0 keeps the library default
  int restarts = -1;
  double step_scale = 0.0;
  double fd_step = 0.0;
  std::uint64_t seed = 12345;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--iterations", iterations, "optimizer iterations per restart (0 = default)");
    cmd->add_option("--restarts", restarts, "random restarts (-1 = default)");
    cmd->add_option("--step-scale", step_scale, "subgradient step scale (0 = default)");
    cmd->add_option("--fd-step", fd_step, "finite-difference step (0 = default)");
    cmd->add_option("--seed", seed, "random seed recorded in the output");
  }

  asym_optimizer_options c_options() const {
    return {iterations, restarts, step_scale, fd_step, seed};
  }

  void record(json& config) const {
    config["iterations"] = iterations;
    config["restarts"] = restarts;
    config["step_scale"] = step_scale;
    config["fd_step"] = fd_step;
    config["seed"] = seed;
  }
};

struct MatrixHandle {
  asym_matrix* m = nullptr;
  ~MatrixHandle() { asym_matrix_free(m); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { asym_string_free(s); }
};

int load_matrix(const std::string& path, MatrixHandle& out) {
  std::string text;
  if (!read_file(path, text)) return fail_input("cannot read " + path);
  if (asym_status s = asym_matrix_from_json(text.c_str(), &out.m); s != ASYM_OK)
    return report_status(s, path);
  return kExitOk;
}

// ---------------------------------------------------------------- commands

int run_skew(const std::string& rho_path, const std::string& h_path, const std::string& f,
             std::uint64_t seed, const std::string& out_path) {
  MatrixHandle rho, h;
  if (int rc = load_matrix(rho_path, rho)) return rc;
  if (int rc = load_matrix(h_path, h)) return rc;
  double value = 0.0;
  if (asym_status s = asym_skew_info(rho.m, h.m, f.c_str(), &value); s != ASYM_OK)
    return report_status(s, "skew_info");
  double var = 0.0, fisher = 0.0;
  if (asym_status s = asym_variance(rho.m, h.m, &var); s != ASYM_OK)
    return report_status(s, "variance");
  if (asym_status s = asym_qfi(rho.m, h.m, &fisher); s != ASYM_OK) return report_status(s, "qfi");
  json config{{"command", "skew"}, {"state", rho_path}, {"ham", h_path},
              {"f", f},            {"seed", seed}};
  json result{{"command", "skew"},
              {"config", config},
              {"value", value},
              {"f_tag", f},
              {"variance", var},
              {"qfi", fisher}};
  return write_output(out_path, result.dump(2) + "\n");
}

int run_smooth(const std::string& rho_path, const std::string& h_path, const std::string& f,
               double eps, const OptimizerFlags& flags, const std::string& witness_path,
               const std::string& out_path) {
  MatrixHandle rho, h;
  if (int rc = load_matrix(rho_path, rho)) return rc;
  if (int rc = load_matrix(h_path, h)) return rc;
  asym_optimizer_options opts = flags.c_options();
  asym_smooth_result res{};
  MatrixHandle witness;
  if (asym_status s = asym_smooth_skew_info(rho.m, h.m, f.c_str(), eps, &opts, &res, &witness.m);
      s != ASYM_OK)
    return report_status(s, "smooth_skew_info");
  json config{{"command", "smooth"}, {"state", rho_path}, {"ham", h_path},
              {"f", f},              {"eps", eps},        {"witness", witness_path}};
  flags.record(config);
  json result{{"command", "smooth"},
              {"config", config},
              {"value", res.value},
              {"epsilon", res.epsilon},
              {"iterations", res.iterations},
              {"converged", res.converged != 0}};
  if (!witness_path.empty()) {
    OwnedString wj;
    if (asym_status s = asym_matrix_to_json(witness.m, &wj.s); s != ASYM_OK)
      return report_status(s, "witness serialization");
    if (int rc = write_output(witness_path, std::string(wj.s) + "\n")) return rc;
  }
  return write_output(out_path, result.dump(2) + "\n");
}

int run_rates(const std::string& family_spec, double R, const std::string& f,
              const std::string& m_text, const std::string& eps_text,
              const OptimizerFlags& flags, const std::string& csv_path,
              const std::string& out_path) {
  struct FamilyHandle {
    asym_family* f = nullptr;
    ~FamilyHandle() { asym_family_free(f); }
  } family;
  if (family_spec == "iid:phi_coh") {
    if (asym_status s = asym_family_iid_phi_coh(R, &family.f); s != ASYM_OK)
      return report_status(s, "family");
  } else if (family_spec == "noniid") {
    if (asym_status s = asym_family_noniid(&family.f); s != ASYM_OK)
      return report_status(s, "family");
  } else {
    return fail_input("unknown family " + family_spec + " (expected iid:phi_coh or noniid)");
  }

  std::vector<int> m_grid;
  if (m_text.empty()) {
    int m_cap = 0;
    asym_family_m_cap(family.f, &m_cap);
    for (int m = 2; m <= m_cap; ++m) m_grid.push_back(m);
  } else if (!parse_int_list(m_text, m_grid)) {
    return fail_input("cannot parse m grid " + m_text);
  }
  std::vector<double> eps_grid{0.2, 0.1, 0.05};
  if (!eps_text.empty() && !parse_double_list(eps_text, eps_grid))
    return fail_input("cannot parse eps grid " + eps_text);

  asym_optimizer_options opts = flags.c_options();
  struct ReportHandle {
    asym_rate_report* r = nullptr;
    ~ReportHandle() { asym_rate_report_free(r); }
  } report;
  if (asym_status s = asym_estimate_rates(family.f, f.c_str(), m_grid.data(),
                                          static_cast<int>(m_grid.size()), eps_grid.data(),
                                          static_cast<int>(eps_grid.size()), &opts, &report.r);
      s != ASYM_OK)
    return report_status(s, "estimate_rates");

  OwnedString rj;
  if (asym_status s = asym_rate_report_json(report.r, &rj.s); s != ASYM_OK)
    return report_status(s, "rate report");
  json config{{"command", "rates"}, {"family", family_spec}, {"R", R},
              {"f", f},             {"m", m_grid},           {"eps", eps_grid}};
  flags.record(config);
  json result{{"command", "rates"}, {"config", config}, {"report", json::parse(rj.s)}};

  if (!csv_path.empty()) {
    std::string csv = config_preamble(config);
    csv += "m";
    for (double e : eps_grid) csv += ",eps=" + fmt(e);
    csv += "\n";
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
      csv += std::to_string(m_grid[i]);
      for (std::size_t j = 0; j < eps_grid.size(); ++j) {
        double v = 0.0;
        asym_rate_report_cell(report.r, static_cast<int>(i), static_cast<int>(j), &v, nullptr);
        csv += "," + fmt(v);
      }
      csv += "\n";
    }
    if (int rc = write_output(csv_path, csv)) return rc;
  }
  return write_output(out_path, result.dump(2) + "\n");
}

int run_maxmin(const std::string& dist_path, double lambda_cap, double tol, std::uint64_t seed,
               const std::string& out_path) {
  struct SequenceHandle {
    asym_sequence* s = nullptr;
    ~SequenceHandle() { asym_sequence_free(s); }
  } seq;
  if (asym_status s = asym_sequence_read_csv(dist_path.c_str(), &seq.s); s != ASYM_OK)
    return report_status(s, dist_path);
  double fmax = 0.0, fmin = 0.0;
  int infinite = 0;
  if (asym_status s = asym_f_max(seq.s, lambda_cap, tol, &fmax, &infinite); s != ASYM_OK)
    return report_status(s, "f_max");
  if (asym_status s = asym_f_min(seq.s, tol, lambda_cap, &fmin); s != ASYM_OK)
    return report_status(s, "f_min");
  json config{{"command", "maxmin"}, {"dist", dist_path},
              {"lambda_cap", lambda_cap}, {"tol", tol},
              {"seed", seed}};
  json result{{"command", "maxmin"},
              {"config", config},
              {"f_max", infinite ? json("infinite") : json(fmax)},
              {"f_max_infinite", infinite != 0},
              {"f_min", fmin}};
  return write_output(out_path, result.dump(2) + "\n");
}

int run_figure1(double p, const std::string& q_text, std::uint64_t seed,
                const std::string& out_path) {
  if (!(p > 0.0 && p < 1.0)) return fail_input("figure1: p must lie in (0,1)");
  std::vector<double> q_grid;
  if (q_text.empty()) {
    for (int i = 1; i <= 19; ++i) q_grid.push_back(0.05 * i);
  } else if (!parse_double_list(q_text, q_grid)) {
    return fail_input("cannot parse q grid " + q_text);
  }
  for (double q : q_grid)
    if (!(q > 0.0 && q < 1.0)) return fail_input("figure1: q grid must lie inside (0,1)");

  json config{{"command", "figure1"}, {"p", p}, {"q", q_grid}, {"seed", seed}};
  std::string csv = config_preamble(config);
  csv += "q,dist_bound_sld,dist_bound_wyd,dist_bound_wyd_limit\n";
  bool ordered = true;
  for (double q : q_grid) {
    double cols[3] = {0.0, 0.0, 0.0};
    if (asym_status s = asym_figure1_row(q, p, cols); s != ASYM_OK)
      return report_status(s, "figure1_row");
    if (cols[1] > cols[0] + 1e-12) ordered = false;
    csv += fmt(q) + "," + fmt(cols[0]) + "," + fmt(cols[1]) + "," + fmt(cols[2]) + "\n";
  }
  if (int rc = write_output(out_path, csv)) return rc;
  if (!ordered) {
    std::fprintf(stderr, "error: figure1: wyd bound exceeds the sld bound on the grid\n");
    return kExitInvariant;
  }
  return kExitOk;
}

int run_noniid(const std::string& m_text, double eps, const OptimizerFlags& flags,
               const std::string& out_path) {
  std::vector<int> m_grid{2, 3, 4, 5, 6, 7};
  if (!m_text.empty() && !parse_int_list(m_text, m_grid))
    return fail_input("cannot parse m grid " + m_text);
  json config{{"command", "example-noniid"}, {"m", m_grid}, {"eps", eps}};
  flags.record(config);
  std::string csv = config_preamble(config);
  csv += "m,variance,formula,abs_diff,distance,smoothed\n";
  for (int m : m_grid) {
    double cols[4] = {0.0, 0.0, 0.0, 0.0};
    if (asym_status s = asym_noniid_row(m, cols); s != ASYM_OK)
      return report_status(s, "noniid_row");
    asym_optimizer_options opts = flags.c_options();
    double smoothed = 0.0;
    if (asym_status s = asym_noniid_smoothed(m, eps, &opts, &smoothed, nullptr); s != ASYM_OK)
      return report_status(s, "noniid_smoothed");
    csv += std::to_string(m) + "," + fmt(cols[0]) + "," + fmt(cols[1]) + "," + fmt(cols[2]) +
           "," + fmt(cols[3]) + "," + fmt(smoothed) + "\n";
  }
  return write_output(out_path, csv);
}

int run_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
  int all_pass = 0;
  OwnedString report;
  if (asym_status s = asym_verify_suite(suite.c_str(), &all_pass, &report.s); s != ASYM_OK)
    return report_status(s, "verify");
  json config{{"command", "verify"}, {"suite", suite}, {"seed", seed}};
  json result{{"command", "verify"}, {"config", config}, {"report", json::parse(report.s)}};
  if (int rc = write_output(out_path, result.dump(2) + "\n")) return rc;
  return all_pass ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric adjusted skew informations, smoothing, and asymptotic rate estimates"};
  app.set_config("--config", "", "flat key=value config file (command-line flags win)");
  app.require_subcommand(1);

  std::string out_path = "-";

  auto* skew = app.add_subcommand("skew", "skew information of a state");
  std::string skew_rho, skew_h, skew_f = "sld";
  std::uint64_t skew_seed = 12345;
  std::string skew_out = "-";
  skew->add_option("--state,--rho", skew_rho, "density matrix JSON file")->required();
  skew->add_option("--ham", skew_h, "Hamiltonian JSON file")->required();
  skew->add_option("--f", skew_f, "monotone function: sld | rld | wyd:p=0.3");
  skew->add_option("--seed", skew_seed, "random seed recorded in the output");
  skew->add_option("--out", skew_out, "output path, - for stdout");

  auto* smooth = app.add_subcommand("smooth", "smoothed skew information over the eps-ball");
  std::string smooth_rho, smooth_h, smooth_f = "sld", smooth_witness, smooth_out = "-";
  double smooth_eps = 0.1;
  OptimizerFlags smooth_flags;
  smooth->add_option("--state,--rho", smooth_rho, "density matrix JSON file")->required();
  smooth->add_option("--ham", smooth_h, "Hamiltonian JSON file")->required();
  smooth->add_option("--f", smooth_f, "monotone function spec");
  smooth->add_option("--eps", smooth_eps, "trace-distance ball radius");
  smooth->add_option("--witness", smooth_witness, "optional path for the minimizer state");
  smooth->add_option("--out", smooth_out, "output path, - for stdout");
  smooth_flags.add_to(smooth);

  auto* rates = app.add_subcommand("rates", "smoothed rate estimates over an (m, eps) grid");
  std::string rates_family = "iid:phi_coh", rates_f = "sld", rates_m, rates_eps, rates_csv,
              rates_out = "-";
  double rates_R = 1.0;
  OptimizerFlags rates_flags;
  rates->add_option("--family", rates_family, "iid:phi_coh or noniid");
  rates->add_option("--R", rates_R, "copies per step for the iid family");
  rates->add_option("--f", rates_f, "monotone function spec");
  rates->add_option("--m", rates_m, "m grid: 2..6 or 2,4,6 (default 2..m_cap)");
  rates->add_option("--eps", rates_eps, "eps grid, comma separated (default 0.2,0.1,0.05)");
  rates->add_option("--csv", rates_csv, "optional CSV path for the value matrix");
  rates->add_option("--out", rates_out, "output path, - for stdout");
  rates_flags.add_to(rates);

  auto* maxmin = app.add_subcommand("maxmin", "max/min Fisher information of a distribution");
  std::string maxmin_dist, maxmin_out = "-";
  double maxmin_cap = 0.0, maxmin_tol = 0.0;
  std::uint64_t maxmin_seed = 12345;
  maxmin->add_option("--dist", maxmin_dist, "energy distribution CSV (n,value)")->required();
  maxmin->add_option("--lambda-cap", maxmin_cap, "bisection cap (0 = 64*max(1,Var))");
  maxmin->add_option("--tol", maxmin_tol, "bisection tolerance (0 = 1e-6)");
  maxmin->add_option("--seed", maxmin_seed, "random seed recorded in the output");
  maxmin->add_option("--out", maxmin_out, "output path, - for stdout");

  auto* figure1 = app.add_subcommand("figure1", "distillation bound comparison for the qutrit mixture");
  double figure1_p = 0.0;
  std::string figure1_q, figure1_out = "-";
  std::uint64_t figure1_seed = 12345;
  figure1->add_option("--p", figure1_p, "WYD exponent in (0,1)")->required();
  figure1->add_option("--q", figure1_q, "q grid, comma separated (default 0.05..0.95)");
  figure1->add_option("--seed", figure1_seed, "random seed recorded in the output");
  figure1->add_option("--out", figure1_out, "output path, - for stdout");

  auto* noniid = app.add_subcommand("example-noniid", "diverging-variance family table");
  std::string noniid_m, noniid_out = "-";
  double noniid_eps = 0.1;
  OptimizerFlags noniid_flags;
  noniid->add_option("--m", noniid_m, "m grid (default 2..7)");
  noniid->add_option("--eps", noniid_eps, "smoothing radius for the last column");
  noniid->add_option("--out", noniid_out, "output path, - for stdout");
  noniid_flags.add_to(noniid);

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  std::string verify_suite = "all", verify_out = "-";
  std::uint64_t verify_seed = 12345;
  verify->add_option("--suite", verify_suite, "skew | smooth | channels | sequences | rates | all");
  verify->add_option("--seed", verify_seed, "random seed recorded in the output");
  verify->add_option("--out", verify_out, "output path, - for stdout");

  // lets --config appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitBadInput;
  }

  if (skew->parsed()) return run_skew(skew_rho, skew_h, skew_f, skew_seed, skew_out);
  if (smooth->parsed())
    return run_smooth(smooth_rho, smooth_h, smooth_f, smooth_eps, smooth_flags, smooth_witness,
                      smooth_out);
  if (rates->parsed())
    return run_rates(rates_family, rates_R, rates_f, rates_m, rates_eps, rates_flags, rates_csv,
                     rates_out);
  if (maxmin->parsed())
    return run_maxmin(maxmin_dist, maxmin_cap, maxmin_tol, maxmin_seed, maxmin_out);
  if (figure1->parsed()) return run_figure1(figure1_p, figure1_q, figure1_seed, figure1_out);
  if (noniid->parsed()) return run_noniid(noniid_m, noniid_eps, noniid_flags, noniid_out);
  if (verify->parsed()) return run_verify(verify_suite, verify_seed, verify_out);
  return fail_input("no command selected");
}

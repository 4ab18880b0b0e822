#include "asymrate.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "asymrate/asymptotics.hpp"
#include "asymrate/io.hpp"
#include "asymrate/monotone.hpp"
#include "asymrate/operators.hpp"
#include "asymrate/reference_states.hpp"
#include "asymrate/sequences.hpp"
#include "asymrate/skew.hpp"
#include "asymrate/smoothing.hpp"
#include "asymrate/verify.hpp"

struct asym_matrix {
  asym::Mat m;
};
struct asym_sequence {
  asym::IntSequence s;
};
struct asym_family {
  asym::StateFamily f;
};
struct asym_rate_report {
  asym::RateReport r;
};

namespace {

thread_local std::string g_last_error;

asym_status fail(asym_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
asym_status wrap(Fn&& fn) {
  try {
    return fn();
  } catch (const asym::dim_error& e) {
    return fail(ASYM_ERR_DIMENSION, e.what());
  } catch (const asym::io_error& e) {
    return fail(ASYM_ERR_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ASYM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ASYM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(ASYM_ERR_NUMERICS, e.what());
  } catch (const std::exception& e) {
    return fail(ASYM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ASYM_ERR_INTERNAL, "unknown error");
  }
}

asym_status require(bool ok, const char* message) {
  return ok ? ASYM_OK : fail(ASYM_ERR_INVALID_ARGUMENT, message);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

asym::OptimizerOptions to_options(const asym_optimizer_options* opts) {
  asym::OptimizerOptions out;
  if (opts == nullptr) return out;
  if (opts->iterations > 0) out.iterations = opts->iterations;
  if (opts->restarts >= 0) out.restarts = opts->restarts;
  if (opts->step_scale > 0.0) out.step_scale = opts->step_scale;
  if (opts->fd_step > 0.0) out.fd_step = opts->fd_step;
  if (opts->seed != 0) out.seed = opts->seed;
  return out;
}

asym::Vec column_vector(const asym_matrix* m, const char* what) {
  if (m->m.cols() != 1) throw std::invalid_argument(std::string(what) + ": expected a column vector");
  return asym::Vec(m->m.col(0));
}

nlohmann::json rate_report_json(const asym::RateReport& r) {
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json conv = nlohmann::json::array();
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    values.push_back(r.values[i]);
    nlohmann::json row = nlohmann::json::array();
    for (bool c : r.converged[i]) row.push_back(c);
    conv.push_back(row);
  }
  return {{"label", r.label},
          {"f", r.f_tag},
          {"m_grid", r.m_grid},
          {"eps_grid", r.eps_grid},
          {"values", values},
          {"converged", conv},
          {"sup_estimate", r.sup_estimate},
          {"inf_estimate", r.inf_estimate},
          {"cost_lower_bound", asym::cost_lower_bound(r)},
          {"dist_upper_bound", asym::dist_upper_bound(r)},
          {"caveat", r.caveat}};
}

}  // namespace

extern "C" {

const char* asym_last_error(void) { return g_last_error.c_str(); }

void asym_string_free(char* s) { std::free(s); }

const char* asym_version(void) { return "0.1.0"; }

asym_status asym_matrix_create(int rows, int cols, const double* re, const double* im,
                               asym_matrix** out) {
  if (asym_status s = require(out != nullptr && re != nullptr, "matrix_create: null argument");
      s != ASYM_OK)
    return s;
  if (asym_status s = require(rows > 0 && cols > 0, "matrix_create: non-positive shape");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    asym::Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        std::size_t k = static_cast<std::size_t>(i) * cols + j;
        m(i, j) = asym::cplx(re[k], im != nullptr ? im[k] : 0.0);
      }
    *out = new asym_matrix{std::move(m)};
    return ASYM_OK;
  });
}

asym_status asym_matrix_from_json(const char* json_text, asym_matrix** out) {
  if (asym_status s = require(json_text != nullptr && out != nullptr,
                              "matrix_from_json: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *out = new asym_matrix{asym::matrix_from_json(nlohmann::json::parse(json_text))};
    return ASYM_OK;
  });
}

asym_status asym_matrix_to_json(const asym_matrix* m, char** json_out) {
  if (asym_status s = require(m != nullptr && json_out != nullptr, "matrix_to_json: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *json_out = dup_string(asym::matrix_to_json(m->m).dump());
    return *json_out != nullptr ? ASYM_OK : fail(ASYM_ERR_INTERNAL, "allocation failed");
  });
}

asym_status asym_matrix_shape(const asym_matrix* m, int* rows, int* cols) {
  if (asym_status s = require(m != nullptr, "matrix_shape: null matrix"); s != ASYM_OK) return s;
  if (rows != nullptr) *rows = static_cast<int>(m->m.rows());
  if (cols != nullptr) *cols = static_cast<int>(m->m.cols());
  return ASYM_OK;
}

asym_status asym_matrix_get(const asym_matrix* m, int row, int col, double* re, double* im) {
  if (asym_status s = require(m != nullptr, "matrix_get: null matrix"); s != ASYM_OK) return s;
  if (asym_status s = require(row >= 0 && row < m->m.rows() && col >= 0 && col < m->m.cols(),
                              "matrix_get: index out of range");
      s != ASYM_OK)
    return s;
  if (re != nullptr) *re = m->m(row, col).real();
  if (im != nullptr) *im = m->m(row, col).imag();
  return ASYM_OK;
}

void asym_matrix_free(asym_matrix* m) { delete m; }

asym_status asym_skew_info(const asym_matrix* rho, const asym_matrix* h, const char* f_spec,
                           double* value) {
  if (asym_status s = require(rho != nullptr && h != nullptr && f_spec != nullptr &&
                                  value != nullptr,
                              "skew_info: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *value = asym::skew_info(asym::DensityMatrix(rho->m), asym::HermitianOperator(h->m),
                             asym::make_builtin(f_spec))
                 .value;
    return ASYM_OK;
  });
}

asym_status asym_qfi(const asym_matrix* rho, const asym_matrix* h, double* value) {
  if (asym_status s = require(rho != nullptr && h != nullptr && value != nullptr,
                              "qfi: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *value = asym::qfi(asym::DensityMatrix(rho->m), asym::HermitianOperator(h->m));
    return ASYM_OK;
  });
}

asym_status asym_variance(const asym_matrix* rho, const asym_matrix* h, double* value) {
  if (asym_status s = require(rho != nullptr && h != nullptr && value != nullptr,
                              "variance: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *value = asym::variance(asym::DensityMatrix(rho->m), asym::HermitianOperator(h->m));
    return ASYM_OK;
  });
}

asym_status asym_trace_distance(const asym_matrix* rho, const asym_matrix* sigma, double* value) {
  if (asym_status s = require(rho != nullptr && sigma != nullptr && value != nullptr,
                              "trace_distance: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *value = asym::trace_distance(asym::DensityMatrix(rho->m), asym::DensityMatrix(sigma->m));
    return ASYM_OK;
  });
}

asym_status asym_smooth_skew_info(const asym_matrix* rho, const asym_matrix* h,
                                  const char* f_spec, double eps,
                                  const asym_optimizer_options* opts, asym_smooth_result* out,
                                  asym_matrix** witness_out) {
  if (asym_status s = require(rho != nullptr && h != nullptr && f_spec != nullptr &&
                                  out != nullptr,
                              "smooth_skew_info: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    asym::SmoothingResult res =
        asym::smooth_skew_info(asym::DensityMatrix(rho->m), asym::HermitianOperator(h->m),
                               asym::make_builtin(f_spec), eps, to_options(opts));
    out->value = res.value;
    out->epsilon = res.epsilon;
    out->iterations = res.iterations;
    out->converged = res.converged ? 1 : 0;
    if (witness_out != nullptr) *witness_out = new asym_matrix{res.witness.matrix()};
    return ASYM_OK;
  });
}

asym_status asym_figure1_row(double q, double p, double out_cols[3]) {
  if (asym_status s = require(out_cols != nullptr, "figure1_row: null output"); s != ASYM_OK)
    return s;
  if (asym_status s = require(q >= 0.0 && q <= 1.0, "figure1_row: q outside [0,1]"); s != ASYM_OK)
    return s;
  return wrap([&] {
    asym::DensityMatrix rho = asym::qutrit_example_state(q);
    asym::HermitianOperator h = asym::qutrit_example_hamiltonian();
    out_cols[0] = 4.0 * asym::skew_info(rho, h, asym::make_sld()).value;
    out_cols[1] = 4.0 * asym::skew_info(rho, h, asym::make_wyd(p)).value;
    out_cols[2] = asym::wyd_p_to_zero_bound(q);
    return ASYM_OK;
  });
}

asym_status asym_noniid_row(int m, double out_cols[4]) {
  if (asym_status s = require(out_cols != nullptr, "noniid_row: null output"); s != ASYM_OK)
    return s;
  return wrap([&] {
    asym::NoniidRow row = asym::noniid_row(m);
    out_cols[0] = row.variance;
    out_cols[1] = row.formula;
    out_cols[2] = row.diff;
    out_cols[3] = row.distance;
    return ASYM_OK;
  });
}

asym_status asym_noniid_smoothed(int m, double eps, const asym_optimizer_options* opts,
                                 double* value, int* converged) {
  if (asym_status s = require(value != nullptr, "noniid_smoothed: null output"); s != ASYM_OK)
    return s;
  return wrap([&] {
    auto [rho, h] = asym::noniid_ladder(m);
    asym::SmoothingResult res =
        asym::smooth_skew_info(rho, h, asym::make_sld(), eps, to_options(opts));
    *value = res.value;
    if (converged != nullptr) *converged = res.converged ? 1 : 0;
    return ASYM_OK;
  });
}

asym_status asym_sequence_create(long long offset, const double* values, int count,
                                 double tail_bound, asym_sequence** out) {
  if (asym_status s = require(values != nullptr && out != nullptr && count > 0,
                              "sequence_create: need a nonempty value array");
      s != ASYM_OK)
    return s;
  if (asym_status s = require(tail_bound >= 0.0, "sequence_create: negative tail bound");
      s != ASYM_OK)
    return s;
  asym::IntSequence seq;
  seq.offset = offset;
  seq.values.assign(values, values + count);
  seq.tail_bound = tail_bound;
  *out = new asym_sequence{std::move(seq)};
  return ASYM_OK;
}

asym_status asym_sequence_read_csv(const char* path, asym_sequence** out) {
  if (asym_status s = require(path != nullptr && out != nullptr, "sequence_read_csv: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    std::vector<std::pair<long long, double>> rows = asym::read_sequence_csv(path);
    if (rows.empty()) throw asym::io_error(std::string("no data rows in ") + path);
    long long lo = rows.front().first, hi = rows.front().first;
    for (const auto& [n, v] : rows) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    asym::IntSequence seq;
    seq.offset = lo;
    seq.values.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [n, v] : rows) seq.values[static_cast<std::size_t>(n - lo)] += v;
    *out = new asym_sequence{std::move(seq)};
    return ASYM_OK;
  });
}

asym_status asym_sequence_poisson(double lambda, double tail_tol, asym_sequence** out) {
  if (asym_status s = require(out != nullptr, "sequence_poisson: null output"); s != ASYM_OK)
    return s;
  return wrap([&] {
    *out = new asym_sequence{
        asym::poisson_certified(lambda, tail_tol > 0.0 ? tail_tol : 1e-10)};
    return ASYM_OK;
  });
}

asym_status asym_sequence_size(const asym_sequence* s, long long* first_index, int* count) {
  if (asym_status st = require(s != nullptr, "sequence_size: null sequence"); st != ASYM_OK)
    return st;
  if (first_index != nullptr) *first_index = s->s.offset;
  if (count != nullptr) *count = static_cast<int>(s->s.values.size());
  return ASYM_OK;
}

asym_status asym_sequence_values(const asym_sequence* s, double* buffer, int buffer_len) {
  if (asym_status st = require(s != nullptr && buffer != nullptr, "sequence_values: null argument");
      st != ASYM_OK)
    return st;
  if (asym_status st = require(buffer_len >= static_cast<int>(s->s.values.size()),
                               "sequence_values: buffer too small");
      st != ASYM_OK)
    return st;
  std::memcpy(buffer, s->s.values.data(), s->s.values.size() * sizeof(double));
  return ASYM_OK;
}

void asym_sequence_free(asym_sequence* s) { delete s; }

asym_status asym_f_max(const asym_sequence* p, double lambda_cap, double tol, double* value,
                       int* infinite) {
  if (asym_status s = require(p != nullptr && value != nullptr && infinite != nullptr,
                              "f_max: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    asym::FmaxResult res = asym::f_max(p->s, lambda_cap, tol > 0.0 ? tol : 1e-6);
    *value = res.value;
    *infinite = res.infinite ? 1 : 0;
    return ASYM_OK;
  });
}

asym_status asym_f_min(const asym_sequence* p, double tol, double lambda_cap, double* value) {
  if (asym_status s = require(p != nullptr && value != nullptr, "f_min: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *value = asym::f_min(p->s, tol > 0.0 ? tol : 1e-6, lambda_cap);
    return ASYM_OK;
  });
}

asym_status asym_family_iid(const asym_matrix* psi, const asym_matrix* h, double R,
                            asym_family** out) {
  if (asym_status s = require(psi != nullptr && h != nullptr && out != nullptr,
                              "family_iid: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *out = new asym_family{asym::iid_family(column_vector(psi, "family_iid"),
                                            asym::HermitianOperator(h->m), R)};
    return ASYM_OK;
  });
}

asym_status asym_family_iid_phi_coh(double R, asym_family** out) {
  if (asym_status s = require(out != nullptr, "family_iid_phi_coh: null output"); s != ASYM_OK)
    return s;
  return wrap([&] {
    *out = new asym_family{asym::iid_family(asym::phi_coh(), asym::coh_hamiltonian(), R)};
    return ASYM_OK;
  });
}

asym_status asym_family_noniid(asym_family** out) {
  if (asym_status s = require(out != nullptr, "family_noniid: null output"); s != ASYM_OK)
    return s;
  return wrap([&] {
    *out = new asym_family{asym::noniid_example_family()};
    return ASYM_OK;
  });
}

asym_status asym_family_m_cap(const asym_family* f, int* m_cap) {
  if (asym_status s = require(f != nullptr && m_cap != nullptr, "family_m_cap: null argument");
      s != ASYM_OK)
    return s;
  *m_cap = f->f.m_cap;
  return ASYM_OK;
}

void asym_family_free(asym_family* f) { delete f; }

asym_status asym_estimate_rates(const asym_family* family, const char* f_spec,
                                const int* m_grid, int m_count, const double* eps_grid,
                                int eps_count, const asym_optimizer_options* opts,
                                asym_rate_report** out) {
  if (asym_status s = require(family != nullptr && f_spec != nullptr && m_grid != nullptr &&
                                  eps_grid != nullptr && out != nullptr,
                              "estimate_rates: null argument");
      s != ASYM_OK)
    return s;
  if (asym_status s = require(m_count > 0 && eps_count > 0, "estimate_rates: empty grid");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    std::vector<int> ms(m_grid, m_grid + m_count);
    std::vector<double> eps(eps_grid, eps_grid + eps_count);
    *out = new asym_rate_report{asym::estimate_rates(family->f, asym::make_builtin(f_spec), ms,
                                                     eps, to_options(opts))};
    return ASYM_OK;
  });
}

asym_status asym_rate_report_json(const asym_rate_report* r, char** json_out) {
  if (asym_status s = require(r != nullptr && json_out != nullptr,
                              "rate_report_json: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    *json_out = dup_string(rate_report_json(r->r).dump(2));
    return *json_out != nullptr ? ASYM_OK : fail(ASYM_ERR_INTERNAL, "allocation failed");
  });
}

asym_status asym_rate_report_cell(const asym_rate_report* r, int i, int j, double* value,
                                  int* converged) {
  if (asym_status s = require(r != nullptr, "rate_report_cell: null report"); s != ASYM_OK)
    return s;
  if (asym_status s = require(i >= 0 && i < static_cast<int>(r->r.values.size()) && j >= 0 &&
                                  j < static_cast<int>(r->r.eps_grid.size()),
                              "rate_report_cell: index out of range");
      s != ASYM_OK)
    return s;
  if (value != nullptr) *value = r->r.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (converged != nullptr)
    *converged = r->r.converged[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ? 1 : 0;
  return ASYM_OK;
}

asym_status asym_rate_report_bounds(const asym_rate_report* r, double* cost_lower,
                                    double* dist_upper) {
  if (asym_status s = require(r != nullptr, "rate_report_bounds: null report"); s != ASYM_OK)
    return s;
  if (cost_lower != nullptr) *cost_lower = asym::cost_lower_bound(r->r);
  if (dist_upper != nullptr) *dist_upper = asym::dist_upper_bound(r->r);
  return ASYM_OK;
}

void asym_rate_report_free(asym_rate_report* r) { delete r; }

asym_status asym_verify_suite(const char* suite, int* all_pass, char** json_report_out) {
  if (asym_status s = require(suite != nullptr && all_pass != nullptr,
                              "verify_suite: null argument");
      s != ASYM_OK)
    return s;
  return wrap([&] {
    asym::VerifyReport rep = asym::run_verify_suite(suite);
    *all_pass = rep.all_pass() ? 1 : 0;
    if (json_report_out != nullptr) {
      *json_report_out = dup_string(asym::verify_report_to_json(rep).dump(2));
      if (*json_report_out == nullptr) return fail(ASYM_ERR_INTERNAL, "allocation failed");
    }
    return ASYM_OK;
  });
}

}  // extern "C"

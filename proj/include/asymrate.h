#ifndef ASYMRATE_H
#define ASYMRATE_H

#ifdef __cplusplus
extern "C" {
#endif

/* C interface to the asymrate library.  All functions return asym_status;
 * on failure asym_last_error() holds a message (thread-local, overwritten by
 * the next failing call).  Strings returned through char** are heap-allocated
 * and must be released with asym_string_free. */

typedef enum {
  ASYM_OK = 0,
  ASYM_ERR_INVALID_ARGUMENT = 1,
  ASYM_ERR_DIMENSION = 2,
  ASYM_ERR_NUMERICS = 3,
  ASYM_ERR_IO = 4,
  ASYM_ERR_INTERNAL = 5
} asym_status;

typedef struct asym_matrix asym_matrix;           /* complex matrix or column vector */
typedef struct asym_sequence asym_sequence;       /* real sequence over integer indices */
typedef struct asym_family asym_family;           /* (state, Hamiltonian) family over m */
typedef struct asym_rate_report asym_rate_report; /* smoothed-rate grid with estimates */

const char* asym_last_error(void);
void asym_string_free(char* s);
const char* asym_version(void);

/* ---- matrices -------------------------------------------------------- */

/* re/im are row-major with rows*cols entries; im may be NULL for a real matrix */
asym_status asym_matrix_create(int rows, int cols, const double* re, const double* im,
                               asym_matrix** out);
/* accepts {dim, re, im} (square) or {rows, cols, re, im} */
asym_status asym_matrix_from_json(const char* json_text, asym_matrix** out);
asym_status asym_matrix_to_json(const asym_matrix* m, char** json_out);
asym_status asym_matrix_shape(const asym_matrix* m, int* rows, int* cols);
asym_status asym_matrix_get(const asym_matrix* m, int row, int col, double* re, double* im);
void asym_matrix_free(asym_matrix* m);

/* ---- single-state quantities ----------------------------------------- */

/* f_spec is "sld" | "rld" | "wyd:p=0.3" (also "wyd:0.3") */
asym_status asym_skew_info(const asym_matrix* rho, const asym_matrix* h, const char* f_spec,
                           double* value);
asym_status asym_qfi(const asym_matrix* rho, const asym_matrix* h, double* value);
asym_status asym_variance(const asym_matrix* rho, const asym_matrix* h, double* value);
asym_status asym_trace_distance(const asym_matrix* rho, const asym_matrix* sigma, double* value);

/* ---- smoothing -------------------------------------------------------- */

typedef struct {
  int iterations;             /* <= 0 selects the library default */
  int restarts;               /* <  0 selects the default */
  double step_scale;          /* <= 0 default */
  double fd_step;             /* <= 0 default */
  unsigned long long seed;    /* 0 selects the default */
} asym_optimizer_options;

typedef struct {
  double value;
  double epsilon;
  int iterations;
  int converged;
} asym_smooth_result;

/* opts may be NULL; witness_out may be NULL when the minimizer is not needed */
asym_status asym_smooth_skew_info(const asym_matrix* rho, const asym_matrix* h,
                                  const char* f_spec, double eps,
                                  const asym_optimizer_options* opts, asym_smooth_result* out,
                                  asym_matrix** witness_out);

/* ---- worked examples -------------------------------------------------- */

/* columns for the qutrit-mixture comparison: 4*I_sld = (11-15q+8q^2)/4,
 * 4*I_wyd(p), and the small-p limit (9-7q)/4 */
asym_status asym_figure1_row(double q, double p, double out_cols[3]);

/* columns: variance, (sqrt(m)/4)(9m-8sqrt(m)-1), |difference|, trace distance
 * to the product of coherence bits */
asym_status asym_noniid_row(int m, double out_cols[4]);

/* smoothed skew information of the m-th family member (ladder form), f = sld */
asym_status asym_noniid_smoothed(int m, double eps, const asym_optimizer_options* opts,
                                 double* value, int* converged);

/* ---- integer sequences ------------------------------------------------ */

asym_status asym_sequence_create(long long offset, const double* values, int count,
                                 double tail_bound, asym_sequence** out);
/* two-column CSV "n,value"; '#' lines ignored */
asym_status asym_sequence_read_csv(const char* path, asym_sequence** out);
asym_status asym_sequence_poisson(double lambda, double tail_tol, asym_sequence** out);
asym_status asym_sequence_size(const asym_sequence* s, long long* first_index, int* count);
asym_status asym_sequence_values(const asym_sequence* s, double* buffer, int buffer_len);
void asym_sequence_free(asym_sequence* s);

/* max/min quantum Fisher information of an energy distribution.
 * lambda_cap <= 0 and tol <= 0 select the defaults.  *infinite is set when no
 * feasible lambda exists below the cap (f_max only). */
asym_status asym_f_max(const asym_sequence* p, double lambda_cap, double tol, double* value,
                       int* infinite);
asym_status asym_f_min(const asym_sequence* p, double tol, double lambda_cap, double* value);

/* ---- state families and rates ----------------------------------------- */

/* psi is a dim x 1 column vector; the pair is period-normalized internally */
asym_status asym_family_iid(const asym_matrix* psi, const asym_matrix* h, double R,
                            asym_family** out);
asym_status asym_family_iid_phi_coh(double R, asym_family** out);
asym_status asym_family_noniid(asym_family** out);
asym_status asym_family_m_cap(const asym_family* f, int* m_cap);
void asym_family_free(asym_family* f);

asym_status asym_estimate_rates(const asym_family* family, const char* f_spec,
                                const int* m_grid, int m_count, const double* eps_grid,
                                int eps_count, const asym_optimizer_options* opts,
                                asym_rate_report** out);
asym_status asym_rate_report_json(const asym_rate_report* r, char** json_out);
asym_status asym_rate_report_cell(const asym_rate_report* r, int i, int j, double* value,
                                  int* converged);
/* cost lower bound 4*sup, distillation upper bound 4*inf */
asym_status asym_rate_report_bounds(const asym_rate_report* r, double* cost_lower,
                                    double* dist_upper);
void asym_rate_report_free(asym_rate_report* r);

/* ---- invariant suites -------------------------------------------------- */

/* suite in {skew, smooth, channels, sequences, rates, all}; json_report_out
 * may be NULL */
asym_status asym_verify_suite(const char* suite, int* all_pass, char** json_report_out);

#ifdef __cplusplus
}
#endif

#endif /* ASYMRATE_H */

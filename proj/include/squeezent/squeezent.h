#ifndef SQUEEZENT_H
#define SQUEEZENT_H

/* C interface to the squeezent library: BSA lower bounds from spin-squeezing
 * inequalities and certified upper bounds from separable ensembles for
 * thermal states of the fully connected XXZ model.
 *
 * Every call returns a sqz_status. On failure sqz_last_error() describes the
 * problem; the message is per thread and valid until the next failing call on
 * that thread. Strings returned through char** are owned by the caller and
 * released with sqz_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SQZ_API __declspec(dllexport)
#else
#define SQZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SQZ_OK = 0,
  SQZ_ERR_DOMAIN = 1,
  SQZ_ERR_CAPABILITY = 2,
  SQZ_ERR_INTEGRITY = 3,
  SQZ_ERR_IO = 4,
  SQZ_ERR_NULL_ARGUMENT = 5,
  SQZ_ERR_INTERNAL = 6
} sqz_status;

typedef struct sqz_state sqz_state;
typedef struct sqz_report sqz_report;

typedef struct {
  double g;
  double gz;
  double h;
  int n;
} sqz_xxz_params;

typedef struct {
  double temperature;
  double log_z;
  double mean_jz;
  double jz2;
  double jx2;
  double xi;
  int k;
  double lower_bound;
} sqz_lower_row;

typedef struct {
  int found;
  double left;  /* lower bound > 0 here */
  double right; /* lower bound = 0 here */
  double temperature;
} sqz_threshold_result;

typedef struct {
  int k;
  double xi;
  double normalization;
  double closed_form_normalization;
  unsigned facet_subset;
  int facet_k;
  double facet_xi;
  double facet_normalization;
  double lower_bound;
  double x_eigenvalues[3];
} sqz_ssi_result;

/* Facet values of the inequality set, all >= 0 for separable states. */
typedef struct {
  double total_variance;
  double pair[3];
  double single[3];
  double casimir;
} sqz_facets;

typedef enum { SQZ_CONVERGED = 0, SQZ_BALL_REACHED = 1, SQZ_MAX_ITERATIONS = 2 } sqz_termination;

typedef struct {
  double t_bsa;
  double residual_two_norm;
  int iterations;
  sqz_termination termination;
  uint64_t seed;
  size_t members;
  int ball_certified;
} sqz_report_summary;

typedef struct {
  int restarts;
  uint64_t seed;
  int max_outer;
  int max_sweeps;
  double tolerance;
  int ball_check;
  double ball_radius; /* 0 selects the default radius */
} sqz_full_options;

typedef struct {
  double member_error;
  double sigma_error;
  double t_error;
  double weight_sum_error;
  double min_remainder;
} sqz_certificate_check;

SQZ_API const char* sqz_version(void);
SQZ_API const char* sqz_last_error(void);
SQZ_API void sqz_string_free(char* s);

/* Largest N for which dense 2^N paths (full ansatz, Schur basis) are allowed. */
SQZ_API int sqz_dense_limit(void);

/* States. temperature = 0 gives the ground-state limit. */
SQZ_API sqz_status sqz_state_gibbs(const sqz_xxz_params* params, double temperature, sqz_state** out,
                                   double* log_z);
SQZ_API sqz_status sqz_state_from_json(const char* json, sqz_state** out);
SQZ_API sqz_status sqz_state_to_json(const sqz_state* state, char** out);
SQZ_API sqz_status sqz_state_num_particles(const sqz_state* state, int* n);
SQZ_API void sqz_state_free(sqz_state* state);

/* Lower bound. */
SQZ_API sqz_status sqz_ssi(const sqz_state* state, sqz_ssi_result* out);
SQZ_API sqz_status sqz_ssi_json(const sqz_state* state, char** out);
SQZ_API sqz_status sqz_inequalities(const sqz_state* state, sqz_facets* out);
SQZ_API sqz_status sqz_lower_sweep(const sqz_xxz_params* params, const double* temperatures, size_t count,
                                   int jobs, sqz_lower_row* rows);
/* t_hi <= 0 picks a range from the couplings. */
SQZ_API sqz_status sqz_threshold(const sqz_xxz_params* params, double t_lo, double t_hi, double tol,
                                 sqz_threshold_result* out);
SQZ_API sqz_status sqz_asymptotic_bounds(double g, double temperature, double* xxx, double* xx);

/* Upper bounds. k_set / thetas may be NULL for the default grids. */
SQZ_API sqz_status sqz_upper_simple(const sqz_state* target, const int* k_set, size_t k_count,
                                    const double* thetas, size_t theta_count, sqz_report** out);
SQZ_API void sqz_full_options_default(sqz_full_options* options);
/* warm_start may be NULL. */
SQZ_API sqz_status sqz_upper_full(const sqz_state* target, const sqz_full_options* options,
                                  const sqz_report* warm_start, sqz_report** out);
SQZ_API sqz_status sqz_report_summary_get(const sqz_report* report, sqz_report_summary* out);
SQZ_API sqz_status sqz_report_sigma(const sqz_report* report, sqz_state** out);
SQZ_API sqz_status sqz_report_to_json(const sqz_report* report, char** out);
/* Re-derives all members from their descriptors; SQZ_ERR_INTEGRITY if the
 * stored sigma does not match. */
SQZ_API sqz_status sqz_report_from_json(const char* json, sqz_report** out);
SQZ_API void sqz_report_free(sqz_report* report);
SQZ_API sqz_status sqz_verify_certificate(const sqz_state* target, const sqz_report* report,
                                          sqz_certificate_check* out);
/* SQZ_ERR_INTEGRITY if lower > upper + 1e-9. */
SQZ_API sqz_status sqz_sandwich(const sqz_state* target, const sqz_report* report, double* lower,
                                double* upper);

/* Self-test; the report is JSON. schur_cache may be NULL. */
SQZ_API sqz_status sqz_selftest(double tighten, const char* schur_cache, char** report_json, int* all_passed);
SQZ_API sqz_status sqz_schur_cache_write(int n, const char* path);

#ifdef __cplusplus
}
#endif

#endif

/* C interface to the xilimit library. All functions return an xl_status;
 * on failure xl_last_error() describes the most recent error on the calling
 * thread. Strings returned through char** are released with xl_free_string. */
#ifndef XILIMIT_XILIMIT_H
#define XILIMIT_XILIMIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(XILIMIT_BUILDING_LIBRARY)
#define XL_API __attribute__((visibility("default")))
#else
#define XL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xl_status {
  XL_OK = 0,
  XL_INVALID_ARGUMENT = 1,
  XL_DEGENERATE_TARGET,
  XL_NUMERICAL_DRIFT,
  XL_SOLVER_FAILURE,
  XL_NEAR_UNITY_EIGENVALUE,
  XL_NEAR_DEGENERATE,
  XL_ON_BRANCH_CUT,
  XL_FORMULA_INCONSISTENCY,
  XL_INVALID_POINTS,
  XL_WINDOW_TOO_SMALL,
  XL_INSUFFICIENT_REPLICAS,
  XL_NOT_COUPLED,
  XL_POLE_PROXIMITY,
  XL_IO,
  XL_INCOMPLETE_RUN,
  XL_MANIFEST,
  XL_INTERNAL = 99
} xl_status;

typedef struct xl_chain xl_chain;
typedef struct xl_spectrum xl_spectrum;

XL_API const char* xl_last_error(void);
XL_API const char* xl_status_name(xl_status status);
XL_API void xl_free_string(char* s);

/* Virtual isometry chain, starting empty (dimension 0). */
XL_API xl_status xl_chain_create(uint64_t seed, uint64_t replica_id, xl_chain** out);
XL_API void xl_chain_destroy(xl_chain* chain);
XL_API xl_status xl_chain_grow(xl_chain* chain, int64_t n);
XL_API int64_t xl_chain_dim(const xl_chain* chain);
/* Copies U_n column-major as interleaved (re, im) into buf of 2 n^2 doubles. */
XL_API xl_status xl_chain_matrix(const xl_chain* chain, double* buf, size_t len);
XL_API xl_status xl_chain_unitarity_residual(const xl_chain* chain, double* out);
XL_API xl_status xl_chain_spectrum(const xl_chain* chain, xl_spectrum** out);

XL_API xl_status xl_spectrum_from_angles(const double* theta, size_t n, xl_spectrum** out);
XL_API void xl_spectrum_destroy(xl_spectrum* spec);
XL_API int64_t xl_spectrum_size(const xl_spectrum* spec);
XL_API xl_status xl_spectrum_angles(const xl_spectrum* spec, double* buf, size_t len);

/* xi_n(z) from the eigenangles. */
XL_API xl_status xl_xi_direct(const xl_spectrum* spec, double re, double im, double* out_re, double* out_im);
/* Truncated product over the periodized points with |k| <= a; tail_bound may be NULL. */
XL_API xl_status xl_xi_product(const xl_spectrum* spec, double re, double im, int64_t a, double* out_re,
                               double* out_im, double* tail_bound);
XL_API xl_status xl_im_log_z(const xl_spectrum* spec, double phi, double* out);
XL_API xl_status xl_count_zeros_arc(const xl_spectrum* spec, double phi_a, double phi_b, int64_t* out);
XL_API xl_status xl_arg_supremum(const xl_spectrum* spec, double* out);
XL_API xl_status xl_mgf_exact(int n, double lambda, double* out);
XL_API xl_status xl_chernoff_bound(int n, double x, double* out);

/* Orchestration. report/out receive JSON or CSV text. */
XL_API xl_status xl_run_grow(const char* manifest_json);
/* hard_ok is 1 when every hard check passed. */
XL_API xl_status xl_run_verify(const char* run_dir, const char* suite, char** report, int* hard_ok);
/* grid_json: {"box":[re_lo,re_hi,im_lo,im_hi],"steps":S,"dims":[...]}; writes under run_dir/xi_grid. */
XL_API xl_status xl_run_xi_grid(const char* run_dir, const char* grid_json, char** summary);
/* options_json: {"n":N,"lambda":L,"alpha":A,"window":K,"bins":B}, all optional. */
XL_API xl_status xl_run_stats(const char* run_dir, const char* kind, const char* options_json, char** out);

#ifdef __cplusplus
}
#endif

#endif

/* Extern-C interface to the coshtx library: opaque handles, status codes,
 * and report bundles (a JSON document plus named CSV side files). */
#ifndef COSHTX_H
#define COSHTX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(COSHTX_BUILDING_LIBRARY)
#define COSHTX_API __attribute__((visibility("default")))
#else
#define COSHTX_API
#endif

typedef enum coshtx_status {
  COSHTX_OK = 0,
  COSHTX_ERR_INVALID_INPUT = 1,
  COSHTX_ERR_UNKNOWN_CATALOG = 2,
  COSHTX_ERR_BAD_PARAMS = 3,
  COSHTX_ERR_DIVERGENT_MOMENT = 4,
  COSHTX_ERR_OVERFLOW = 5,
  COSHTX_ERR_NON_FINITE = 6,
  COSHTX_ERR_ILL_CONDITIONED = 7,
  COSHTX_ERR_INTERNAL = 8
} coshtx_status;

typedef struct coshtx_measure coshtx_measure;
typedef struct coshtx_psi coshtx_psi;
typedef struct coshtx_affine coshtx_affine;
typedef struct coshtx_bundle coshtx_bundle;

COSHTX_API const char* coshtx_version(void);
COSHTX_API const char* coshtx_status_string(coshtx_status status);
/* Message of the most recent failing call on this thread; "" if none. */
COSHTX_API const char* coshtx_last_error(void);

/* Measures: {"atoms":[{"u":..,"w":..}], "densities":[...]} */
COSHTX_API coshtx_status coshtx_measure_from_json(const char* json, coshtx_measure** out);
COSHTX_API void coshtx_measure_free(coshtx_measure* m);
COSHTX_API coshtx_status coshtx_measure_moment(const coshtx_measure* m, int n, double* out);
COSHTX_API coshtx_status coshtx_measure_support_sup(const coshtx_measure* m, double* out);

/* psi: {"catalog":{...}} | {"measure":{...}} | {"series":{"coeffs":[...]}} */
COSHTX_API coshtx_status coshtx_psi_from_json(const char* json, coshtx_psi** out);
COSHTX_API coshtx_status coshtx_psi_catalog(const char* name, const char* const* keys,
                                            const double* values, size_t n_params,
                                            coshtx_psi** out);
COSHTX_API coshtx_status coshtx_psi_from_measure(const coshtx_measure* m, coshtx_psi** out);
COSHTX_API void coshtx_psi_free(coshtx_psi* p);
COSHTX_API coshtx_status coshtx_psi_eval(const coshtx_psi* p, double x, double* out);
COSHTX_API coshtx_status coshtx_psi_eval_log(const coshtx_psi* p, double x, double* out);
COSHTX_API coshtx_status coshtx_psi_eval_prime(const coshtx_psi* p, double x, double* out);
COSHTX_API coshtx_status coshtx_psi_eval_phi(const coshtx_psi* p, double x, double* out);
/* gamma_0..gamma_N into out[N+1]; log form keeps orders beyond double range. */
COSHTX_API coshtx_status coshtx_psi_series_coeffs(const coshtx_psi* p, int N, double* out);
COSHTX_API coshtx_status coshtx_psi_log_series_coeffs(const coshtx_psi* p, int N, double* out);
/* b0 is +inf when growth is superexponential. */
COSHTX_API coshtx_status coshtx_psi_growth_rate(const coshtx_psi* p, double* b0, double* a0);

/* T x = A x + a; A row-major kappa x kappa (NULL means identity). */
COSHTX_API coshtx_status coshtx_affine_create(int kappa, const double* A, const double* a,
                                              coshtx_affine** out);
COSHTX_API coshtx_status coshtx_affine_from_json(const char* json, coshtx_affine** out);
COSHTX_API void coshtx_affine_free(coshtx_affine* T);
COSHTX_API coshtx_status coshtx_rn_derivative(const coshtx_psi* p, const coshtx_affine* T,
                                              const double* x, double* out);

/* Report bundles. */
COSHTX_API coshtx_status coshtx_analyze_psi(const coshtx_psi* p, int m_max, double x_max,
                                            coshtx_bundle** out);
COSHTX_API coshtx_status coshtx_classify(const coshtx_psi* p, const coshtx_affine* T, int m,
                                         uint64_t seed, coshtx_bundle** out);
COSHTX_API coshtx_status coshtx_recover(const double* moments, size_t count, int k,
                                        coshtx_bundle** out);
COSHTX_API coshtx_status coshtx_reproduce(const char* example_id, coshtx_bundle** out);
COSHTX_API coshtx_status coshtx_verify(coshtx_bundle** out);

COSHTX_API size_t coshtx_example_count(void);
COSHTX_API const char* coshtx_example_id(size_t i);

/* Strings returned by bundle accessors live until coshtx_bundle_free. */
COSHTX_API const char* coshtx_bundle_report(const coshtx_bundle* b);
COSHTX_API int coshtx_bundle_ok(const coshtx_bundle* b);
COSHTX_API size_t coshtx_bundle_file_count(const coshtx_bundle* b);
COSHTX_API const char* coshtx_bundle_file_name(const coshtx_bundle* b, size_t i);
COSHTX_API const char* coshtx_bundle_file_contents(const coshtx_bundle* b, size_t i);
COSHTX_API void coshtx_bundle_free(coshtx_bundle* b);

#ifdef __cplusplus
}
#endif

#endif /* COSHTX_H */

#ifndef TESTVECTOR_TESTVECTOR_H
#define TESTVECTOR_TESTVECTOR_H

/* C interface to the testvector library.
 *
 * Every function returns a tv_status. On failure a message is available from
 * tv_last_error() on the calling thread until the next call into the library.
 * Strings returned through char** are heap-allocated and must be released
 * with tv_string_free. Matrices are dense and row-major.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TV_BUILDING_LIBRARY)
#    define TV_API __declspec(dllexport)
#  else
#    define TV_API __declspec(dllimport)
#  endif
#else
#  define TV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tv_status {
  TV_OK = 0,
  TV_INVALID_ARGUMENT = 1,
  TV_PURITY_VIOLATION = 2,
  TV_PARITY_VIOLATION = 3,
  TV_POLE = 4,
  TV_DIVERGENCE = 5,
  TV_QUADRATURE_NONCONVERGENCE = 6,
  TV_CONSTRUCTION_BUG = 7,
  TV_ILL_CONDITIONED = 8,
  TV_INTERNAL = 9
} tv_status;

typedef enum tv_hecke_combo { TV_COMBO_PLUS = 0, TV_COMBO_MINUS = 1, TV_COMBO_POPA = 2 } tv_hecke_combo;

typedef struct tv_params tv_params;
typedef struct tv_phi tv_phi;

/* Zero fields select the library defaults. */
typedef struct tv_quadrature {
  int nodes;
  double t_lo;
  double t_hi;
  double tolerance;
} tv_quadrature;

typedef struct tv_verify_options {
  size_t trials;
  size_t hw_trials;
  double hw_step;
  size_t iwasawa_samples;
  size_t haar_samples;
  long max_rank_dimension;
  int threads;
} tv_verify_options;

TV_API const char* tv_version(void);
TV_API const char* tv_last_error(void);
TV_API const char* tv_status_name(tv_status status);
TV_API void tv_string_free(char* s);

/* Parameters: highest weight nu (even length) and a twist character
 * sgn^chi_sign |.|^(chi_re + i chi_im). */
TV_API tv_status tv_params_create(const long* nu, size_t len, int chi_sign, double chi_re,
                                  double chi_im, tv_params** out);
/* {"nu": [...], "chi": {"sign": 0|1, "power": [re, im]}} */
TV_API tv_status tv_params_from_json(const char* json, tv_params** out);
TV_API void tv_params_destroy(tv_params* p);
TV_API tv_status tv_params_n(const tv_params* p, int* n);
/* m, l, N, omega, omega_pi, parity and phi case as a JSON object. */
TV_API tv_status tv_params_describe(const tv_params* p, char** json);

/* phi for the params, with chi_0 the sign part of the twist. */
TV_API tv_status tv_phi_create(const tv_params* p, tv_phi** out);
TV_API tv_status tv_phi_create_for_weight(const long* N, size_t n, int omega0_sign, int chi0_sign,
                                          tv_phi** out);
TV_API void tv_phi_destroy(tv_phi* phi);
TV_API tv_status tv_phi_n(const tv_phi* phi, int* n);
/* Factor list, weight, case and f_eta(w) for every sign pattern. */
TV_API tv_status tv_phi_describe(const tv_phi* phi, char** json);
/* x is a (2n x 2n) orthogonal matrix, len = 4 n^2. out receives re, im. */
TV_API tv_status tv_phi_eval(const tv_phi* phi, const double* x, size_t len, double out[2]);
/* Component f_eta(x) = phi(c(eta) x); eta has n entries in {+1, -1}. */
TV_API tv_status tv_section_eval(const tv_phi* phi, const int* eta, size_t n, const double* x,
                                 size_t len, double out[2]);

TV_API tv_status tv_weyl_element(int n, double* out, size_t len);
/* Haar sample number `index` of O(dim) for the given seed. */
TV_API tv_status tv_sample_O(int dim, uint64_t seed, uint64_t index, double* out, size_t len);

/* L(s, pi x chi) with its Gamma_C factors, as JSON. */
TV_API tv_status tv_lfactor_json(const tv_params* p, double s_re, double s_im, char** json);
TV_API tv_status tv_lfactor(const tv_params* p, double s_re, double s_im, double out[2]);

TV_API tv_status tv_hecke_integral(long k, long m, int chi_sign, double u_re, double u_im,
                                   double s_re, double s_im, tv_hecke_combo combo,
                                   const tv_quadrature* quad, double out[2], double* error);

TV_API tv_status tv_lambda_exact(const tv_params* p, double s_re, double s_im, double out[2]);
TV_API tv_status tv_lambda_montecarlo(const tv_params* p, double s_re, double s_im,
                                      size_t samples, uint64_t seed, int threads,
                                      const tv_quadrature* quad, double out[2],
                                      double* std_error);
TV_API tv_status tv_measure_normalization(const tv_params* p, double s_re, double s_im,
                                          const tv_quadrature* quad, double out[2]);
TV_API tv_status tv_normalized_ratio(const tv_params* p, double s_re, double s_im, double out[2]);

/* Suite reports as a JSON array. suite is one of torus, component, right,
 * hw, rank, iwasawa, haar, all. opts may be NULL. *all_pass is set to 1 when
 * every report passes. */
TV_API tv_status tv_verify_json(const tv_params* p, const char* suite, uint64_t seed,
                                const tv_verify_options* opts, char** json, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif

/*
 * twpk - thermally excited wave-packets for free quantum gases on a
 * discretized periodic box.
 *
 * C interface to the twpk core: opaque handles, integer status codes, and
 * out-parameters. Every function returns TWPK_OK on success; on failure a
 * thread-local message is available through twpk_last_error(). Strings
 * returned through char** out-parameters are heap-allocated and must be
 * released with twpk_string_free().
 *
 * Conventions: hbar = k_B = 1; momentum grid k = 2 pi n / L with
 * n in [-M/2, M/2); wave vectors are passed as the integer numbers n.
 * Vectors have up to 3 components; only the first `dim` entries are read.
 */

#ifndef TWPK_H
#define TWPK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twpk_status {
  TWPK_OK = 0,
  TWPK_EINVAL = 1,   /* invalid argument / module precondition violated */
  TWPK_ECONFIG = 2,  /* malformed configuration */
  TWPK_EIO = 3,      /* file i/o failure */
  TWPK_EFAIL = 4,    /* verification found failing checks */
  TWPK_EINTERNAL = 5 /* unexpected internal error */
} twpk_status;

typedef struct twpk_lattice twpk_lattice;
typedef struct twpk_envelope twpk_envelope;
typedef struct twpk_state twpk_state;

const char* twpk_version(void);
const char* twpk_last_error(void);
void twpk_string_free(char* s);

/* ------------------------------------------------------------- lattice */

twpk_status twpk_lattice_create(int dim, double box_length, int points_per_axis,
                                double mass, twpk_lattice** out);
void twpk_lattice_destroy(twpk_lattice* lat);
twpk_status twpk_lattice_info(const twpk_lattice* lat, int* dim,
                              double* box_length, int* points_per_axis,
                              double* mass, size_t* site_count);

/* ------------------------------------------------------------ envelope */

twpk_status twpk_envelope_create_delta(const twpk_lattice* lat,
                                       twpk_envelope** out);
twpk_status twpk_envelope_create_thermal(const twpk_lattice* lat, double beta,
                                         twpk_envelope** out);
/* thermal envelope carrying the extra L^{-D/2} of the |R,K,T> convention */
twpk_status twpk_envelope_create_thermal_boxed(const twpk_lattice* lat,
                                               double beta, twpk_envelope** out);
twpk_status twpk_envelope_normalize(const twpk_envelope* env,
                                    twpk_envelope** out);
void twpk_envelope_destroy(twpk_envelope* env);
twpk_status twpk_envelope_norm2(const twpk_envelope* env, double* out);

/* --------------------------------------------------------------- states */

/* center: D real coordinates; k_numbers: D integers on the momentum grid */
twpk_status twpk_state_create(const twpk_envelope* env, const double* center,
                              const int* k_numbers, twpk_state** out);
twpk_status twpk_state_rt(const twpk_lattice* lat, double temperature,
                          const double* center, twpk_state** out);
twpk_status twpk_state_rkt(const twpk_lattice* lat, double temperature,
                           const double* center, const int* k_numbers,
                           twpk_state** out);
void twpk_state_destroy(twpk_state* s);

twpk_status twpk_state_norm2(const twpk_state* s, double* out);
twpk_status twpk_state_momentum_mean(const twpk_state* s, double* out3);
twpk_status twpk_state_position_mean(const twpk_state* s, double* out3);
/* uv_ok is set to 0 when the momentum distribution touches the zone edge */
twpk_status twpk_state_energy(const twpk_state* s, double* mean,
                              double* variance, int* uv_ok);
twpk_status twpk_state_uncertainty(const twpk_state* s, double* dk2_3,
                                   double* dx2_3, double* product_3);
twpk_status twpk_state_evolve(const twpk_state* s, double t, twpk_state** out);
twpk_status twpk_overlap(const twpk_state* a, const twpk_state* b, double* re,
                         double* im);
/* delta_k_numbers must be even grid multiples per axis */
twpk_status twpk_delta_phi(const twpk_envelope* env, const double* delta_r,
                           const int* delta_k_numbers, double* re, double* im);

/* -------------------------------------------------------------- thermal */

twpk_status twpk_thermal_info(const twpk_lattice* lat, double temperature,
                              double* lambda, double* z_lattice,
                              double* z_continuum, int* regime_ok);
twpk_status twpk_boltzmann_kernel(const twpk_lattice* lat, double temperature,
                                  const double* r1, const double* r0,
                                  double* exact, double* gaussian);
/* k_B T = k_B T_R + k_B T_K with T_K = x T; x in [0.05, 0.95] */
twpk_status twpk_verify_split(const twpk_lattice* lat, double temperature,
                              double x, const int* k_numbers, double* lhs,
                              double* rhs, double* rel_error, int* regime_ok);
twpk_status twpk_kernel_split(const twpk_lattice* lat, double temperature,
                              double x, const double* r1, const double* r0,
                              double* direct, double* product_form,
                              double* rel_error, int* regime_ok);

/* ------------------------------------------------- experiment commands */

/*
 * Config text is the flat key=value format described in the README.
 * Each runner writes its outputs and hands back a JSON summary string.
 * twpk_verify_run sets all_passed to 1 iff every check passed; malformed
 * configs return TWPK_ECONFIG before any computation.
 */
twpk_status twpk_verify_run(const char* config_text, char** json_report,
                            int* all_passed);
twpk_status twpk_wavefunction_run(const char* config_text, const double* center,
                                  const int* k_numbers, const double* temps,
                                  size_t n_temps, const char* out_dir,
                                  char** json_summary, int* all_passed);
twpk_status twpk_kernel_run(const char* config_text, const char* out_path,
                            char** json_summary);
twpk_status twpk_spectrum_run(const char* config_text, const char* operator_kind,
                              const char* out_path, char** json_summary);
twpk_status twpk_sweep_run(const char* config_text, const char* parameter,
                           const double* values, size_t n_values,
                           const char* out_path, char** json_summary);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TWPK_H */

/* contextsim C API: classical share models, context-communication CHSH
 * protocols, correlation-polytope facets, and squeezed-band profiles.
 *
 * Conventions: functions return CONTEXTSIM_OK (0) on success and a nonzero
 * status otherwise; contextsim_last_error() describes the last failure on
 * the calling thread. Handles are opaque and must be released with the
 * matching *_free function. All angles are radians.
 */
#ifndef CONTEXTSIM_H
#define CONTEXTSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  CONTEXTSIM_OK = 0,
  CONTEXTSIM_EINVAL = 1,   /* invalid argument or domain violation */
  CONTEXTSIM_EMISMATCH = 2 /* table check against the reference rows failed */
};

const char* contextsim_version(void);

/* Message for the last failing call on this thread ("" if none). */
const char* contextsim_last_error(void);

/* ---- closed-form laws -------------------------------------------------- */

/* Band single-side laws: P+ = (1 + cos alpha)/2, E = 2 P+ - 1. */
int contextsim_band_prob_plus(double alpha, double* out);
int contextsim_band_single_expectation(double alpha, double* out);

/* One-share pair law E = 1 - |cos alpha - cos beta|. */
int contextsim_band_pair_expectation(double alpha, double beta, double* out);

/* Re-aligned pair law E = cos theta. */
int contextsim_band_adaptive_expectation(double theta, double* out);

/* Orientation-averaged law E = 1 - (2/pi) sin theta, theta in [0, pi]. */
int contextsim_band_uniform_expectation(double theta, double* out);

/* Bomb-fragment law E = 2 theta/pi - 1, theta in [0, pi]. */
int contextsim_peres_correlation(double theta, double* out);

/* ---- valuation table --------------------------------------------------- */

typedef struct contextsim_table contextsim_table;

typedef struct {
  double x;
  int outcomes[4];    /* A, A', B, B' as +1/-1 */
  int na_products[4]; /* AB, AB', A'B, A'B' */
  int na_chsh;
  int ad_products[4];
  int ad_chsh;
} contextsim_table_row;

/* Deterministic table at the canonical settings (0, pi/2, pi/4, -pi/4),
 * orientation 0, one row per breaking point. count may be 0. */
int contextsim_table_create(const double* x, size_t count, contextsim_table** out);
int contextsim_table_create_builtin(contextsim_table** out);
void contextsim_table_free(contextsim_table* table);

size_t contextsim_table_size(const contextsim_table* table);
int contextsim_table_get_row(const contextsim_table* table, size_t index,
                             contextsim_table_row* out);

/* Signs-and-CHSH comparison against the built-in reference rows.
 * CONTEXTSIM_OK on match, CONTEXTSIM_EMISMATCH otherwise (the mismatch
 * detail is available via contextsim_last_error). */
int contextsim_table_check_reference(const contextsim_table* table);

/* The 20 built-in breaking points; text is the published spelling. */
size_t contextsim_builtin_x_count(void);
int contextsim_builtin_x(size_t index, double* value, const char** text);

/* ---- Monte Carlo estimators -------------------------------------------- */

typedef struct {
  double mean;
  double std_error; /* sample standard deviation / sqrt(n) */
  double analytic;  /* meaningful iff has_analytic */
  int has_analytic;
  uint64_t n;         /* trials kept */
  uint64_t discarded; /* tie-excluded trials (bomb model only) */
  uint64_t cobits_total;
  uint64_t bits_total; /* outcome bits sent; always 0 */
} contextsim_estimate;

enum {
  CONTEXTSIM_PROTOCOL_NONADAPTIVE = 0,
  CONTEXTSIM_PROTOCOL_ADAPTIVE = 1,
  /* experimental: independent share per CHSH term */
  CONTEXTSIM_PROTOCOL_ADAPTIVE_FRESH = 2
};

/* settings = {alpha, alpha_prime, beta, beta_prime} in radians; NULL means
 * the canonical quad. Estimates are byte-identical for any worker count. */
int contextsim_chsh_estimate(int protocol, const double settings[4], uint64_t trials,
                             uint64_t seed, unsigned workers, contextsim_estimate* out);

enum {
  CONTEXTSIM_MODEL_BAND_ADAPTIVE = 0,
  CONTEXTSIM_MODEL_BAND_UNIFORM = 1,
  CONTEXTSIM_MODEL_PERES = 2,
  CONTEXTSIM_MODEL_URN = 3
};

/* One estimate per grid angle, written to out_points[0..count). */
int contextsim_curve_estimate(int model, const double* thetas, size_t count,
                              uint64_t trials, uint64_t seed, unsigned workers,
                              contextsim_estimate* out_points);

/* ---- correlation polytope ---------------------------------------------- */

typedef struct contextsim_facets contextsim_facets;

enum {
  CONTEXTSIM_COORDS_RAW = 0,    /* (a, a', b, b') vertices: the 4-cube */
  CONTEXTSIM_COORDS_PRODUCT = 1 /* (ab, ab', a'b, a'b') vertices */
};

int contextsim_facets_enumerate(int coords, contextsim_facets** out);
void contextsim_facets_free(contextsim_facets* facets);

size_t contextsim_facets_size(const contextsim_facets* facets);
size_t contextsim_facets_dim(const contextsim_facets* facets);

/* coeffs must hold dim entries; the inequality is coeffs . p <= rhs. */
int contextsim_facets_get(const contextsim_facets* facets, size_t index,
                          long long* coeffs, long long* rhs);

/* Writes the line "c1 c2 ... cd <= r" (NUL-terminated). Fails with
 * CONTEXTSIM_EINVAL if the buffer is too small. */
int contextsim_facets_line(const contextsim_facets* facets, size_t index, char* buf,
                           size_t buflen);

/* ---- squeezed band ------------------------------------------------------ */

/* Adaptive correlation f-profile values at perimeter fractions; the shape
 * is an ellipse with the given positive semi-axes. */
int contextsim_squeeze_curve(double semi_horizontal, double semi_vertical,
                             const double* fractions, size_t count, double* out);

/* Pair law 1 - |f(t_alpha) - f(t_beta)| for one squeezed band. */
int contextsim_squeeze_pair(double semi_horizontal, double semi_vertical, double t_alpha,
                            double t_beta, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CONTEXTSIM_H */

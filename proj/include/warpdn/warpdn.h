#ifndef WARPDN_H
#define WARPDN_H

/* C interface to the warped Dirichlet-to-Neumann library.
 * All functions return a status code (WDN_OK on success) unless noted;
 * wdn_last_error() gives a thread-local message for the most recent failure.
 * Strings returned through char** are owned by the caller; release them
 * with wdn_string_free. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define WDN_OK 0
#define WDN_EINVAL 1          /* bad argument */
#define WDN_EPARSE 2          /* malformed JSON / profile description */
#define WDN_ENOTINTEGRABLE 3  /* coefficient fails the L1 requirement */
#define WDN_ESINGULAR 4       /* singularity too strong for the mesh */
#define WDN_EPOLE 5           /* evaluation too close to an eigenvalue */
#define WDN_EBRACKET 6        /* root bracketing / refinement failed */
#define WDN_EADMISS 7         /* boundary data outside the admissible class */
#define WDN_EBLOWUP 8         /* ODE solution left the admissible range */
#define WDN_EDEGENERATE 9     /* problem determined only up to gauge/constants */
#define WDN_EUNSUPPORTED 10   /* operation not available for this object */
#define WDN_ENUMERIC 11       /* loss of precision / overflow */
#define WDN_EIO 12            /* file or stream error */
#define WDN_EUNKNOWN 99

typedef struct wdn_profile wdn_profile;   /* piecewise coefficient on [a, b] */
typedef struct wdn_metric wdn_metric;     /* warped-product cylinder metric */
typedef struct wdn_problem wdn_problem;   /* radial Sturm-Liouville problem */

const char* wdn_last_error(void);
void wdn_string_free(char* s);

/* ---- profiles -------------------------------------------------------- */
int wdn_profile_parse(const char* json, wdn_profile** out);
int wdn_profile_constant(double value, double lo, double hi, wdn_profile** out);
void wdn_profile_free(wdn_profile* p);
int wdn_profile_eval(const wdn_profile* p, double x, double* out);
int wdn_profile_to_json(const wdn_profile* p, char** json);

/* ---- metrics --------------------------------------------------------- */
int wdn_metric_parse(const char* json, wdn_metric** out);
void wdn_metric_free(wdn_metric* g);
int wdn_metric_to_json(const wdn_metric* g, char** json);
/* arclength change of variables to the h0 = h1 normal form */
int wdn_metric_normalize(const wdn_metric* g, wdn_metric** out);

/* ---- radial problems ------------------------------------------------- */
/* -(p u')' + q u = z r u; any of q may be NULL (treated as 0) */
int wdn_problem_create(const wdn_profile* p, const wdn_profile* q,
                       const wdn_profile* r, wdn_problem** out);
/* radial reduction of a metric at fiber-2 eigenvalue nu */
int wdn_problem_from_metric(const wdn_metric* g, double lambda, double nu,
                            wdn_problem** out);
void wdn_problem_free(wdn_problem* pr);

/* boundary kinds: 0 Dirichlet-Dirichlet, 1 Neumann-Dirichlet, 2 Dirichlet-Neumann */
int wdn_spectrum(const wdn_problem* pr, int kind, int kmax,
                 double* values, double* residuals);
/* Weyl functions at z = zre + i zim: out = {Re M, Im M, Re N, Im N} */
int wdn_weyl(const wdn_problem* pr, double zre, double zim, double out[4]);
int wdn_growth_constant(const wdn_problem* pr, double* out);
/* log|char(w^2)| / r along the ray w = r e^{i theta}; which: 0 Delta, 1 D, 2 E */
int wdn_indicator(const wdn_problem* pr, int which, double theta,
                  const double* radii, int count, double* values);
/* sup over the t grid of the normalized shared-characteristic discrepancy */
int wdn_cam_discrepancy(const wdn_problem* a, const wdn_problem* b,
                        const double* tgrid, int count, double* values, double* sup);
/* spectral measure of M: k atoms/weights plus the Herglotz offset */
int wdn_spectral_measure(const wdn_problem* pr, int kmax,
                         double* atoms, double* weights, double* offset);
int wdn_weyl_law_ratio(const wdn_problem* pr, int kmax,
                       double* raw, double* extrapolated);

/* ---- DN map ---------------------------------------------------------- */
/* blocks for the first `count` harmonics ordered by mu + nu; out7 holds
 * {m, n, mu, nu, L, T, R} per block; *filled <= count on return */
int wdn_dn_grid(const wdn_metric* g, double lambda, int count,
                double* out7, int* filled);
int wdn_dn_block(const wdn_metric* g, double lambda, int m, int n, double out7[7]);
int wdn_gauge_discrepancy(const wdn_metric* g, double lambda, int harmonics,
                          double* out);
/* JSON response {x: [...], kappa: [...], flux: [...]} */
int wdn_conformal_ode(const wdn_metric* g, double lambda, double kappa0,
                      double flux0, int refinement, char** json);

/* ---- degenerating (cloaking) families -------------------------------- */
/* variant: "A" | "B" | "C" | "D"; f1/f2: hidden interior profile JSON on
 * [1/4, 3/4]. maxdiff: largest entrywise DN-block change when the interior
 * is swapped. reportJson: per-harmonic blocks and energies. */
int wdn_cloak_verify(const char* variant, double r, int n, const char* f1,
                     const char* f2, int harmonics, double* maxdiff,
                     char** reportJson);

/* ---- special functions ----------------------------------------------- */
int wdn_bessel_i(double nu, double x, double* out);
int wdn_bessel_k(double nu, double x, double* out);
int wdn_bessel_i_prime(double nu, double x, double* out);
/* random sweep of the I-ratio and log-derivative bounds */
int wdn_bessel_bounds(int samples, unsigned seed, int* violations,
                      double* worstMargin);

/* ---- inverse fitting -------------------------------------------------- */
/* observed: JSON array of blocks [{m, n, mu, nu, L, T, R}, ...];
 * family: "constant-h1" | "affine-h1" | "gauge-curve";
 * resultJson: {theta, misfit, evaluations, starts} */
int wdn_fit(const char* family, double lambda, const char* observed,
            int starts, unsigned seed, char** resultJson);
/* forward model for synthetic data: blocks JSON for theta */
int wdn_fit_synthesize(const char* family, const double* theta, int dim,
                       double lambda, int harmonics, char** blocksJson);

#ifdef __cplusplus
}
#endif

#endif /* WARPDN_H */

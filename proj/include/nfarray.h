/* nfarray: near-field movable-antenna array sensing bounds and placement.
 *
 * C interface over the C++ core. All lengths are in wavelengths (the model is
 * normalized to lambda = 1). Angles enter as the spatial cosine u = cos(theta),
 * u in [0,1). Every function returns an nfa_status; on failure a thread-local
 * message is available via nfa_last_error(). Output parameters are written only
 * on NFA_OK. Opaque handles are created and released by the matching
 * create/free pair; handles are not thread-safe for concurrent mutation but may
 * be shared read-only across threads.
 */

#ifndef NFARRAY_H
#define NFARRAY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define NFA_API __declspec(dllexport)
#else
#define NFA_API __attribute__((visibility("default")))
#endif

typedef enum nfa_status {
    NFA_OK = 0,
    NFA_ERR_INVALID_ARGUMENT = 1,  /* null pointer, bad enum, out-of-range scalar */
    NFA_ERR_PARSE = 2,             /* config file unreadable or not valid JSON */
    NFA_ERR_VALIDATION = 3,        /* config field violates an invariant */
    NFA_ERR_INFEASIBLE_GEOMETRY = 4, /* (N-1)*d > A or similar */
    NFA_ERR_DEGENERATE_ARRAY = 5,  /* zero information: coincident antennas */
    NFA_ERR_SINGULAR_FIM = 6,      /* joint FIM not invertible (e.g. N = 2) */
    NFA_ERR_EMPTY_FEASIBLE_SET = 7, /* no grid point satisfies the spacing constraint */
    NFA_ERR_MISSING_SCHEME = 8,    /* reduction report lacks proposed or benchmark rows */
    NFA_ERR_CONVERGENCE = 9,       /* iterative eigensolver exceeded its sweep budget */
    NFA_ERR_IO = 10,               /* output file could not be written */
    NFA_ERR_INTERNAL = 11
} nfa_status;

/* Thread-local message for the most recent failure on this thread. Never NULL;
 * empty string when no error has occurred. Owned by the library. */
NFA_API const char* nfa_last_error(void);

NFA_API const char* nfa_version(void);

/* ---- sensing configuration ---- */

typedef struct nfa_sensing_config nfa_sensing_config;

/* num_antennas >= 2, segment_length > 0, min_spacing > 0,
 * (num_antennas-1)*min_spacing <= segment_length, num_snapshots >= 1,
 * tx_power > 0, noise_power >= 0 (0 = noiseless synthesis; bounds need > 0),
 * channel_gain_mag > 0. */
NFA_API nfa_status nfa_sensing_config_create(int num_antennas,
                                             double segment_length,
                                             double min_spacing,
                                             int num_snapshots,
                                             double tx_power,
                                             double noise_power,
                                             double channel_gain_mag,
                                             nfa_sensing_config** out);
NFA_API void nfa_sensing_config_free(nfa_sensing_config* cfg);

/* kappa = sigma^2 / (8 pi^2 T P N |beta|^2) with lambda = 1. */
NFA_API nfa_status nfa_kappa(const nfa_sensing_config* cfg, double* out);
NFA_API nfa_status nfa_fresnel_distance(const nfa_sensing_config* cfg, double* out);
NFA_API nfa_status nfa_rayleigh_distance(const nfa_sensing_config* cfg, double* out);

/* ---- array geometry ---- */

typedef enum nfa_scheme {
    NFA_SCHEME_PROPOSED = 0,        /* case-optimized placement */
    NFA_SCHEME_ULA_HALFWAVE = 1,    /* x_n = (n-1) d */
    NFA_SCHEME_SPARSE_ULA = 2,      /* x_n = (n-1) A/(N-1) */
    NFA_SCHEME_FARFIELD_OPTIMAL = 3 /* two end clusters, same as theorem placement */
} nfa_scheme;

/* Two d-spaced clusters hugging the segment ends: x_n = (n-1)d for
 * n <= floor(N/2), x_n = A - (N-n)d above. `out` must hold N doubles. */
NFA_API nfa_status nfa_apv_theorem1(const nfa_sensing_config* cfg, double* out);

/* Benchmark geometries; NFA_SCHEME_PROPOSED is rejected here (it depends on a
 * placement problem, not on the config alone). */
NFA_API nfa_status nfa_apv_benchmark(const nfa_sensing_config* cfg, nfa_scheme kind,
                                     double* out);

/* Checks the position-vector invariants: sorted ascending, inside [0, A],
 * adjacent spacing >= d (1e-12 tolerance at the boundaries). */
NFA_API nfa_status nfa_apv_validate(const nfa_sensing_config* cfg, const double* x);

/* ---- Cramer-Rao bounds ---- */

/* Worst-case search domain. Grids are inclusive of both endpoints. */
typedef struct nfa_domain {
    double u_lo, u_hi;  /* 0 <= u_lo <= u_hi < 1 */
    double r_lo, r_hi;  /* 0 < r_lo <= r_hi */
    int grid_u, grid_r; /* >= 2 points per searched axis */
} nfa_domain;

/* AoA bound with known range r_star (kappa / F_u). */
NFA_API nfa_status nfa_crb_aoa(const nfa_sensing_config* cfg, const double* x,
                               double u, double r_star, double* out);

/* Range bound with known AoA u_star (kappa / F_r). */
NFA_API nfa_status nfa_crb_range(const nfa_sensing_config* cfg, const double* x,
                                 double r, double u_star, double* out);

/* Joint 2x2 bound at eta = (u, r): out[0]=crb_u, out[1]=crb_r, out[2]=crb_ur. */
NFA_API nfa_status nfa_crb_joint(const nfa_sensing_config* cfg, const double* x,
                                 double u, double r, double out[3]);

/* Maximize the bound over the domain; the argmax comes back too. */
NFA_API nfa_status nfa_worst_case_aoa(const nfa_sensing_config* cfg, const double* x,
                                      const nfa_domain* dom, double r_star,
                                      double* bound, double* u_opt);
NFA_API nfa_status nfa_worst_case_range(const nfa_sensing_config* cfg, const double* x,
                                        const nfa_domain* dom, double u_star,
                                        double* bound, double* r_opt);
NFA_API nfa_status nfa_worst_case_joint(const nfa_sensing_config* cfg, const double* x,
                                        const nfa_domain* dom, double* trace_bound,
                                        double* u_opt, double* r_opt);

/* ---- placement optimization ---- */

typedef enum nfa_case {
    NFA_CASE_AOA = 1,   /* estimate u, r known */
    NFA_CASE_RANGE = 2, /* estimate r, u known */
    NFA_CASE_JOINT = 3  /* estimate both */
} nfa_case;

/* Sequential per-antenna grid descent on S = {i*A/M : i = 0..M}.
 * fixed_param is r_star for NFA_CASE_AOA, u_star for NFA_CASE_RANGE, ignored
 * for NFA_CASE_JOINT. x_init may be NULL (starts from the theorem placement);
 * otherwise it is snapped to the grid. Writes the optimized positions (N
 * doubles, sorted) and the final objective value (higher is better; the joint
 * objective is 1 / worst-case CRB trace). */
NFA_API nfa_status nfa_optimize_placement(const nfa_sensing_config* cfg,
                                          nfa_case case_tag, double fixed_param,
                                          const nfa_domain* dom, int grid_m,
                                          const double* x_init, int passes,
                                          double* x_out, double* objective_out);

/* Objective used by the optimizer for a given placement (same convention). */
NFA_API nfa_status nfa_placement_objective(const nfa_sensing_config* cfg,
                                           nfa_case case_tag, double fixed_param,
                                           const nfa_domain* dom, const double* x,
                                           double* out);

/* ---- Monte-Carlo estimator validation ---- */

typedef struct nfa_mc_params {
    int trials;            /* >= 1 */
    uint64_t seed;
    int spectrum_grid_u;   /* 1D AoA search grid (case 1, and joint u axis) */
    int spectrum_grid_r;   /* 1D range search grid (case 2, and joint r axis) */
    double r_min, r_max;   /* range search interval */
} nfa_mc_params;

/* Runs seeded MUSIC trials at truth (u_true, r_true) and reports empirical
 * mean squared errors. The parameter the case treats as known (the distance
 * for NFA_CASE_AOA, the cosine for NFA_CASE_RANGE) is taken from the matching
 * truth coordinate. mse_u is 0 for the range-only case and mse_r is 0 for the
 * AoA-only case. */
NFA_API nfa_status nfa_monte_carlo_mse(const nfa_sensing_config* cfg,
                                       nfa_case case_tag, const double* x,
                                       double u_true, double r_true,
                                       const nfa_mc_params* mc,
                                       double* mse_u, double* mse_r);

/* ---- batch runs (the CLI surface) ---- */

typedef struct nfa_run_config nfa_run_config;

/* Parses a flat JSON object; missing fields take the documented defaults. */
NFA_API nfa_status nfa_run_config_load(const char* path, nfa_run_config** out);

/* Same, from an in-memory JSON string ("{}" gives the full default run). */
NFA_API nfa_status nfa_run_config_parse(const char* json_text, nfa_run_config** out);

NFA_API void nfa_run_config_free(nfa_run_config* rc);

/* CLI-style overrides; call before nfa_run_execute. case_tag 0 = all cases.
 * set_trials with K > 0 enables the Monte-Carlo columns and uses K trials for
 * every case (including the 2D joint search); K = 0 disables Monte-Carlo. */
NFA_API nfa_status nfa_run_config_set_case(nfa_run_config* rc, int case_tag);
NFA_API nfa_status nfa_run_config_set_out_dir(nfa_run_config* rc, const char* dir);
NFA_API nfa_status nfa_run_config_set_trials(nfa_run_config* rc, int trials);
NFA_API nfa_status nfa_run_config_set_seed(nfa_run_config* rc, uint64_t seed);

/* Executes the configured sweeps, writes sweep.csv / apv_<scheme>.csv /
 * reductions.csv / sweep.plotspec into the output directory, and returns a
 * human-readable summary. Free the summary with nfa_string_free. */
NFA_API nfa_status nfa_run_execute(const nfa_run_config* rc, char** summary);

NFA_API void nfa_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NFARRAY_H */

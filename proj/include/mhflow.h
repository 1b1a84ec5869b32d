/*
 * mhflow - compatible n-triads, the multi-Cauchy-Riemann operator, and
 * (n+1)-energy gradient flow on discretized torus maps.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through these calls; functions return MHF_OK on success and
 * an error code otherwise, with a human-readable message available from
 * mhf_last_error() (thread-local).
 */
#ifndef MHFLOW_H
#define MHFLOW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef MHF_API
#if defined(_WIN32)
#define MHF_API
#else
#define MHF_API __attribute__((visibility("default")))
#endif
#endif

typedef enum mhf_status {
    MHF_OK = 0,
    MHF_ERR_INVALID_ARGUMENT = 1,
    MHF_ERR_DIMENSION = 2,
    MHF_ERR_UNSUPPORTED_TRIAD = 3,
    MHF_ERR_PARSE = 4,
    MHF_ERR_IO = 5,
    MHF_ERR_LATTICE = 6,
    MHF_ERR_DEGENERATE = 7,
    MHF_ERR_STALL = 8,
    MHF_ERR_ITER_CAP = 9,
    MHF_ERR_INTERNAL = 10
} mhf_status;

typedef struct mhf_triad mhf_triad;
typedef struct mhf_gridmap mhf_gridmap;
typedef struct mhf_report mhf_report;
typedef struct mhf_history mhf_history;

MHF_API const char* mhf_version(void);
MHF_API const char* mhf_status_name(mhf_status status);
/* Message describing the most recent failure on this thread. */
MHF_API const char* mhf_last_error(void);

/* ---- triads -------------------------------------------------------- */

/* family: "hermitian" (even dim), "conformal" (any dim 2..8),
 * "associative" (dim 7), "cayley" (dim 8). */
MHF_API mhf_status mhf_triad_create(const char* family, int dim, mhf_triad** out);
MHF_API void mhf_triad_destroy(mhf_triad* t);
MHF_API int mhf_triad_dim(const mhf_triad* t);
MHF_API int mhf_triad_fold(const mhf_triad* t);
MHF_API double mhf_triad_lambda(const mhf_triad* t);

/* Residuals of the compatibility axioms over seeded random samples. */
MHF_API mhf_status mhf_triad_check_compatibility(const mhf_triad* t, int samples,
                                                 double tol, uint64_t seed,
                                                 mhf_report** out);
/* Sampled comass over random orthonormal frames plus equality cases. */
MHF_API mhf_status mhf_triad_comass_check(const mhf_triad* t, int frames,
                                          uint64_t seed, mhf_report** out);
/* Both checks merged into one report (comass keys prefixed "comass_"). */
MHF_API mhf_status mhf_triad_verify(const mhf_triad* t, int samples, int frames,
                                    double tol, uint64_t seed, mhf_report** out);

/* ---- grid maps ------------------------------------------------------ */

/* A sampled map from the periodic unit box (domain_dim axes, shape[a] nodes
 * per axis, periodic[a] in {0,1} or NULL for all-periodic) into the flat
 * torus carrying the named triad. Values start at zero. */
MHF_API mhf_status mhf_gridmap_create(const char* family, int target_dim,
                                      int domain_dim, const int* shape,
                                      const int* periodic, mhf_gridmap** out);
MHF_API void mhf_gridmap_destroy(mhf_gridmap* m);
MHF_API mhf_status mhf_gridmap_read_file(const char* path, mhf_gridmap** out);
MHF_API mhf_status mhf_gridmap_write_file(const mhf_gridmap* m, const char* path);
MHF_API int64_t mhf_gridmap_node_count(const mhf_gridmap* m);
MHF_API int mhf_gridmap_target_dim(const mhf_gridmap* m);
MHF_API int mhf_gridmap_domain_dim(const mhf_gridmap* m);
/* Node values, row-major, target_dim doubles per node. count must equal
 * node_count * target_dim. */
MHF_API mhf_status mhf_gridmap_set_values(mhf_gridmap* m, const double* values,
                                          int64_t count);
MHF_API mhf_status mhf_gridmap_get_values(const mhf_gridmap* m, double* values,
                                          int64_t count);

/* Energies, identity terms, residuals, distortion, critical locus. */
MHF_API mhf_status mhf_gridmap_diagnostics(const mhf_gridmap* m, mhf_report** out);
/* Multiholomorphy certificate at the given tolerance. */
MHF_API mhf_status mhf_gridmap_verify(const mhf_gridmap* m, double tol,
                                      mhf_report** out);

/* ---- energy minimization -------------------------------------------- */

typedef struct mhf_solver_config {
    int64_t max_iters;   /* default 50000 */
    double grad_tol;     /* default 1e-8  */
    double step0;        /* default 1.0   */
    double backtrack;    /* default 0.5   */
    double armijo;       /* default 1e-4  */
    int64_t record_every;/* default 10    */
} mhf_solver_config;

MHF_API void mhf_solver_config_init(mhf_solver_config* cfg);

/* Gradient descent on the (n+1)-energy. Returns MHF_OK when the gradient
 * tolerance was reached, MHF_ERR_ITER_CAP at the iteration cap and
 * MHF_ERR_STALL when the line search underflowed; in those three cases
 * *final_map and *history are still produced. cfg may be NULL for
 * defaults; final_map/history may be NULL when not wanted. */
MHF_API mhf_status mhf_flow_minimize(const mhf_gridmap* m0,
                                     const mhf_solver_config* cfg,
                                     mhf_gridmap** final_map,
                                     mhf_history** history);

MHF_API void mhf_history_destroy(mhf_history* h);
MHF_API int64_t mhf_history_rows(const mhf_history* h);
/* out6 receives iter, energy, pullback, gap, max_residual, step. */
MHF_API mhf_status mhf_history_row(const mhf_history* h, int64_t row, double* out6);
/* CSV with header iter,energy,pullback,gap,max_residual,step. */
MHF_API mhf_status mhf_history_write_csv(const mhf_history* h, const char* path);

/* ---- reports --------------------------------------------------------- */

MHF_API void mhf_report_destroy(mhf_report* r);
/* The full key=value text block (newline-separated, stable ordering). */
MHF_API const char* mhf_report_text(const mhf_report* r);
/* 1 = pass, 0 = fail, -1 = not a pass/fail report. */
MHF_API int mhf_report_pass(const mhf_report* r);
/* Value of a numeric key; NaN when absent. */
MHF_API double mhf_report_value(const mhf_report* r, const char* key);

#ifdef __cplusplus
}
#endif

#endif /* MHFLOW_H */

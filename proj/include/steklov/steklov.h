/*
 * Copyright (c) The steklov authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the steklov library. Every function returning int returns a
 * steklov_status; on failure steklov_last_error() describes the problem for the
 * calling thread. Handles are opaque and released with the matching _destroy
 * function (NULL is accepted).
 */

#ifndef STEKLOV_STEKLOV_H
#define STEKLOV_STEKLOV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(STEKLOV_BUILDING_LIBRARY)
#define STEKLOV_API __declspec(dllexport)
#else
#define STEKLOV_API __declspec(dllimport)
#endif
#else
#define STEKLOV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum steklov_status
{
  STEKLOV_OK = 0,
  STEKLOV_ERR_INVALID_ARGUMENT = 1,
  STEKLOV_ERR_UNKNOWN_DOMAIN = 2,
  STEKLOV_ERR_LEVEL_OVER_CAP = 3,
  STEKLOV_ERR_DEGENERATE_ELEMENT = 4,
  STEKLOV_ERR_INVALID_REFRACTION_INDEX = 5,
  STEKLOV_ERR_NEAR_NEUMANN_EIGENVALUE = 6,
  STEKLOV_ERR_SOLVE_FAILED_ON_CONTOUR = 7,
  STEKLOV_ERR_MAX_DEPTH_EXCEEDED = 8,
  STEKLOV_ERR_REGION_CONTAINS_ORIGIN = 9,
  STEKLOV_ERR_NO_CONVERGENCE = 10,
  STEKLOV_ERR_ARGUMENT_OUT_OF_RANGE = 11,
  STEKLOV_ERR_DENOMINATOR_NEAR_ZERO = 12,
  STEKLOV_ERR_INSUFFICIENT_LEVELS = 13,
  STEKLOV_ERR_IO = 14,
  STEKLOV_ERR_INTERNAL = 15
} steklov_status;

typedef struct steklov_mesh steklov_mesh;
typedef struct steklov_problem steklov_problem;
typedef struct steklov_eigs steklov_eigs;
typedef struct steklov_convergence steklov_convergence;

STEKLOV_API const char *steklov_version(void);
STEKLOV_API const char *steklov_status_name(int status);
/* Message of the last failed call on this thread; "" if none. */
STEKLOV_API const char *steklov_last_error(void);

/* ---- mesh ---- */

/* domain: "disk", "square" or "lshape"; level: uniform refinements (0..12). */
STEKLOV_API int steklov_mesh_create(const char *domain, int level, steklov_mesh **out);
STEKLOV_API int steklov_mesh_read_json(const char *path, steklov_mesh **out);
STEKLOV_API void steklov_mesh_destroy(steklov_mesh *mesh);
STEKLOV_API int steklov_mesh_stats(const steklov_mesh *mesh, double *h, int *num_vertices,
                                   int *num_boundary_vertices, double *area);
STEKLOV_API int steklov_mesh_write_json(const steklov_mesh *mesh, const char *path);

/* ---- problem: assembled matrices for wavenumber k and constant index n ---- */

STEKLOV_API int steklov_problem_create(const steklov_mesh *mesh, double k, double n_re,
                                       double n_im, steklov_problem **out);
STEKLOV_API void steklov_problem_destroy(steklov_problem *problem);
/* Matrix Market style files for G, M_n and M_bd. */
STEKLOV_API int steklov_problem_write_matrices(const steklov_problem *problem,
                                               const char *g_path, const char *mn_path,
                                               const char *mbd_path);
/* Factorizes G - k^2 M_n and forms the boundary NtD matrix. rcond receives the
 * condition estimate; condition_warning is set when it is below 1e-8. */
STEKLOV_API int steklov_problem_build_ntd(steklov_problem *problem, int *dimension,
                                          double *rcond, int *condition_warning);
/* Binary matrix and JSON sidecar; builds the NtD matrix first if needed. */
STEKLOV_API int steklov_problem_write_ntd(steklov_problem *problem, const char *bin_path,
                                          const char *json_path);

/* ---- eigenvalue search ---- */

typedef struct steklov_solve_options
{
  const char *method; /* "srim" (default) or "rim" */
  const char *plane;  /* "lambda" (default) or "mu": plane of the region and output */
  double re0, re1, im0, im1;
  double d0;
  double delta0;
  int quad_nodes;
  uint64_t seed;
  int record_trace;
} steklov_solve_options;

STEKLOV_API void steklov_solve_options_default(steklov_solve_options *options);
STEKLOV_API int steklov_solve(const steklov_problem *problem,
                              const steklov_solve_options *options, steklov_eigs **out);
STEKLOV_API void steklov_eigs_destroy(steklov_eigs *eigs);
STEKLOV_API size_t steklov_eigs_count(const steklov_eigs *eigs);
/* Value in the requested plane, full-system residual and search depth. */
STEKLOV_API int steklov_eigs_get(const steklov_eigs *eigs, size_t index, double *re, double *im,
                                 double *residual, int *depth);
STEKLOV_API size_t steklov_eigs_trace_size(const steklov_eigs *eigs);
STEKLOV_API uint64_t steklov_eigs_indicator_evaluations(const steklov_eigs *eigs);
STEKLOV_API int steklov_eigs_write_csv(const steklov_eigs *eigs, const char *path);
STEKLOV_API int steklov_eigs_write_trace(const steklov_eigs *eigs, const char *path);

/* ---- exact disk reference ---- */

STEKLOV_API int steklov_bessel_j(int m, double z_re, double z_im, double *j_re, double *j_im,
                                 double *dj_re, double *dj_im);
STEKLOV_API int steklov_disk_lambda(double k, double n_re, double n_im, int m, double *re,
                                    double *im);
/* All lambda_m (m = 0..m_max) in the rectangle, written as CSV; count may be NULL. */
STEKLOV_API int steklov_reference_write(double k, double n_re, double n_im, int m_max,
                                        double re0, double re1, double im0, double im1,
                                        const char *path, size_t *count);
/* lambda_m(n) for real n in [n0, n1] on steps + 1 samples, written as CSV. */
STEKLOV_API int steklov_sweep_write(double k, double n0, double n1, int steps, int m_max,
                                    const char *path);

/* ---- convergence experiment ---- */

typedef struct steklov_convergence_options
{
  const char *domain;
  int level_min, level_max;
  double k;
  double n_re, n_im;
  int use_default_region; /* nonzero: region chosen from n, the fields below ignored */
  double re0, re1, im0, im1;
  const char *method;
  double d0;
  double delta0;
  int quad_nodes;
  uint64_t seed;
} steklov_convergence_options;

/* Callback after each level: level, h, number of eigenvalues found. */
typedef void (*steklov_progress_fn)(int level, double h, size_t count, void *user);

STEKLOV_API void steklov_convergence_options_default(steklov_convergence_options *options);
/* Runs all levels and writes the tables under out_dir (skipped if NULL). */
STEKLOV_API int steklov_convergence_run(const steklov_convergence_options *options,
                                        const char *out_dir, steklov_progress_fn progress,
                                        void *user, steklov_convergence **out);
STEKLOV_API void steklov_convergence_destroy(steklov_convergence *conv);
STEKLOV_API size_t steklov_convergence_modes(const steklov_convergence *conv);
STEKLOV_API size_t steklov_convergence_levels(const steklov_convergence *conv);
STEKLOV_API int steklov_convergence_value(const steklov_convergence *conv, size_t level_index,
                                          size_t mode, double *h, double *re, double *im);
STEKLOV_API int steklov_convergence_rate(const steklov_convergence *conv, size_t mode,
                                         double *ref_re, double *ref_im, double *rate);

#ifdef __cplusplus
}
#endif

#endif /* STEKLOV_STEKLOV_H */

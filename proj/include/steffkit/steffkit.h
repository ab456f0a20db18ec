#ifndef STEFFKIT_H
#define STEFFKIT_H

/* C interface to the steffkit solver library.
 *
 * Conventions:
 *   - Every fallible call returns sk_status; SK_OK is zero.  On failure a
 *     human-readable message is available from sk_last_error() until the
 *     next steffkit call on the same thread.
 *   - Numbers cross the boundary as decimal strings so no precision is lost
 *     at any significand width.  Strings returned through char* or char**
 *     are heap copies owned by the caller; release them with
 *     sk_string_free().  Strings returned as const char* are owned by the
 *     handle they came from.
 *   - Complex values are written "re,im"; plain "re" is accepted on input
 *     where the imaginary part is zero.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sk_status {
  SK_OK = 0,
  SK_ERR_ARGUMENT = 1,   /* bad value, unknown name, malformed number */
  SK_ERR_DIMENSION = 2,  /* vector or matrix shape mismatch */
  SK_ERR_PARSE = 3,      /* expression source rejected */
  SK_ERR_COINCIDENT = 4, /* divided-difference nodes collapsed */
  SK_ERR_SINGULAR = 5,   /* linear operator not invertible */
  SK_ERR_WEIGHT = 6,     /* weight fails the order conditions */
  SK_ERR_IO = 7,         /* file could not be written */
  SK_ERR_INTERNAL = 8
} sk_status;

const char* sk_version(void);

/* Message for the most recent failure on this thread; empty, never NULL. */
const char* sk_last_error(void);

void sk_string_free(char* s);

/* ---- problems ---------------------------------------------------------- */

typedef struct sk_problem sk_problem;

/* Built-in systems: "sine_chain" (any n >= 2), "cubic_p1" (complex, n = 1),
 * "cubic_p1_real" (n = 1), "quad_p2" (n = 2).  Pass n = 0 to take a
 * problem's natural dimension. */
sk_status sk_problem_builtin(const char* name, int n, sk_problem** out);

/* Parse a real system from expression source: one expression per line in
 * variables x1..xn, '#' comments, functions sin cos exp ln. */
sk_status sk_problem_parse(const char* source, int n, sk_problem** out);

int sk_problem_dim(const sk_problem* p);
int sk_problem_is_complex(const sk_problem* p);
int sk_problem_num_roots(const sk_problem* p); /* known roots; 0 for parsed */
const char* sk_problem_name(const sk_problem* p);
void sk_problem_free(sk_problem* p);

/* One line per built-in: name|dimension|field|roots|description. */
char* sk_problem_list(void);

/* ---- solver ------------------------------------------------------------ */

typedef struct sk_solve_opts {
  int m;              /* steps per outer iteration, order 2m; >= 1 */
  double beta;        /* shift scalars, ignored once memory is on */
  double delta;
  const char* weight; /* "paper-poly" | "reciprocal" | "poly:c0,c1,..." */
  const char* memory; /* "none" | "divdiff" | "kurchatov" */
  const char* tol;    /* stop when increment + residual drop below */
  int max_iter;
  unsigned precision_bits; /* 0 = default 1024; ignored by basin rendering */
  int allow_nonconforming_weight;
} sk_solve_opts;

/* Fills the defaults: m=1, beta=delta=0.1, paper-poly, no memory,
 * tol "1e-100", 100 iterations, 1024 bits. */
void sk_solve_opts_init(sk_solve_opts* o);

typedef enum sk_solve_status {
  SK_SOLVE_CONVERGED = 0,
  SK_SOLVE_MAX_ITERATIONS = 1,
  SK_SOLVE_FAILED = 2
} sk_solve_status;

typedef struct sk_trace sk_trace;

/* Run the solver from x0 (length = problem dimension).  x_prev seeds the
 * with-memory modes and may be NULL for the default seed x0 + 0.1; it is
 * rejected without memory.  A run that stops at SK_SOLVE_FAILED still
 * returns SK_OK here with the partial trace; only malformed input earns a
 * nonzero status. */
sk_status sk_solve(const sk_problem* p, const char* const* x0, size_t x0_len,
                   const char* const* x_prev, size_t x_prev_len,
                   const sk_solve_opts* o, sk_trace** out);

sk_solve_status sk_trace_status(const sk_trace* t);
const char* sk_trace_failure_reason(const sk_trace* t); /* empty unless failed */
size_t sk_trace_iterations(const sk_trace* t);
size_t sk_trace_num_iterates(const sk_trace* t); /* includes seeds */
int sk_trace_has_seed(const sk_trace* t);        /* iterate 0 is x^(-1) */

/* 1 and writes the estimate if at least three increments were recorded. */
int sk_trace_acoc(const sk_trace* t, double* out);

/* Norm of x^(k+1) - x^(k) resp. F(x^(k+1)), k in [0, iterations). */
sk_status sk_trace_increment(const sk_trace* t, size_t k, char** out);
sk_status sk_trace_residual(const sk_trace* t, size_t k, char** out);

/* Component i of iterate k.  im may be NULL when the caller expects a real
 * problem; it receives "0" for real fields otherwise. */
sk_status sk_trace_component(const sk_trace* t, size_t k, size_t i, char** re,
                             char** im);

void sk_trace_free(sk_trace* t);

/* ---- weights ----------------------------------------------------------- */

typedef struct sk_weight_report {
  double identity_deviation; /* || H(I) - I ||_F */
  double h1;                 /* directional first derivative at I */
  double h2;                 /* directional second derivative at I */
  int order_conditions;      /* H(I) = I and H1 = -1 */
  int memory_conditions;     /* order_conditions and H2 = 2 */
} sk_weight_report;

/* Numerically probe the order conditions of a weight at the identity.
 * bits = 0 takes the customary 256. */
sk_status sk_weight_check(const char* weight, unsigned bits,
                          sk_weight_report* out);

/* ---- efficiency -------------------------------------------------------- */

/* (2m)^(1/evals) as a decimal string with the given significant digits. */
sk_status sk_efficiency_index(long m, long n, int digits, char** out);

/* Stationary point and best integer step count for dimension n. */
sk_status sk_optimal_steps(long n, double* m_star, long* m_best);

/* CSV table n,m,evals,index,is_best over the given dimensions. */
sk_status sk_efficiency_csv(const long* n_values, size_t count, long m_max,
                            char** out);

/* ---- basins of attraction ---------------------------------------------- */

#define SK_BASIN_NONE (-1)
#define SK_BASIN_DIVERGED (-2)

typedef struct sk_basin_opts {
  double x_min, x_max, y_min, y_max;
  int width, height;
  int max_iter;
  double conv_tol;
  double div_threshold; /* seed-pair planes only */
  int memory_plane;     /* 0: initial-point plane, 1: (x0, x-1) seed pairs */
  int threads;          /* 0 = hardware concurrency */
} sk_basin_opts;

/* Fills the defaults: [-3,3]^2 window, 400x400, 80 iterations (500 is the
 * customary budget for seed-pair planes), conv_tol 1e-3, threshold 1e150. */
void sk_basin_opts_init(sk_basin_opts* o);

typedef struct sk_basin sk_basin;

/* Render one plane.  Orbits run in machine precision; the problem must
 * carry known roots.  Plane selection follows the problem shape: complex
 * 1-d and real 2-d problems give initial-point planes, real 1-d problems
 * with memory_plane = 1 give seed-pair planes (solver memory required). */
sk_status sk_basin_render(const sk_problem* p, const sk_basin_opts* bo,
                          const sk_solve_opts* so, sk_basin** out);

size_t sk_basin_num_roots(const sk_basin* b);

/* Fraction of pixels attached to a root index, SK_BASIN_NONE, or
 * SK_BASIN_DIVERGED. */
double sk_basin_share(const sk_basin* b, int index);

sk_status sk_basin_pixel(const sk_basin* b, int row, int col, int* out);

/* Binary PPM (P6) resp. CSV rows row,col,root_index,iterations.  Both are
 * byte-deterministic for a fixed configuration. */
sk_status sk_basin_write_ppm(const sk_basin* b, const char* path);
sk_status sk_basin_write_csv(const sk_basin* b, const char* path);

void sk_basin_free(sk_basin* b);

#ifdef __cplusplus
}
#endif

#endif /* STEFFKIT_H */

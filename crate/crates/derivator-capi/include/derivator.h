#ifndef DERIVATOR_H
#define DERIVATOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * An opaque finite category.
 */
typedef struct DvCategory DvCategory;

/**
 * An opaque bounded chain complex over F_p.
 */
typedef struct DvComplex DvComplex;

/**
 * An opaque strict diagram of chain complexes.
 */
typedef struct DvDiagram DvDiagram;

/**
 * The most recent error message on this thread, or NULL. Caller frees.
 */
char *dv_last_error_message(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void dv_string_free(char *s);

/**
 * Parse a category from JSON (explicit or poset shorthand).
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` a valid pointer.
 */
int dv_category_from_json(const char *json, struct DvCategory **out);

/**
 * Build a catalogued shape by name (for instance "square" or "figure-b").
 *
 * # Safety
 * `name` must be a NUL-terminated string, `out` a valid pointer.
 */
int dv_shape(const char *name, struct DvCategory **out);

/**
 * # Safety
 * `cat` must come from this library; `out` must be valid.
 */
int dv_category_to_json(const struct DvCategory *cat, char **out);

/**
 * # Safety
 * `cat` must come from this library or be NULL.
 */
void dv_category_free(struct DvCategory *cat);

/**
 * # Safety
 * `json` must be a NUL-terminated string, `out` a valid pointer.
 */
int dv_complex_from_json(const char *json, struct DvComplex **out);

/**
 * # Safety
 * `c` must come from this library; `out` must be valid.
 */
int dv_complex_to_json(const struct DvComplex *c, char **out);

/**
 * Graded homology dimensions as a JSON object, degree to dimension.
 *
 * # Safety
 * `c` must come from this library; `out` must be valid.
 */
int dv_complex_homology(const struct DvComplex *c, char **out);

/**
 * # Safety
 * `c` must come from this library or be NULL.
 */
void dv_complex_free(struct DvComplex *c);

/**
 * Parse a diagram whose "category" field names a catalogued shape or a
 * file path (resolved against the working directory).
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` a valid pointer.
 */
int dv_diagram_from_json(const char *json, struct DvDiagram **out);

/**
 * # Safety
 * `d` must come from this library or be NULL.
 */
void dv_diagram_free(struct DvDiagram *d);

/**
 * The homotopy colimit of a diagram.
 *
 * # Safety
 * `d` must come from this library; `out` must be valid.
 */
int dv_hocolim(const struct DvDiagram *d, struct DvComplex **out);

/**
 * The homotopy limit of a diagram.
 *
 * # Safety
 * `d` must come from this library; `out` must be valid.
 */
int dv_holim(const struct DvDiagram *d, struct DvComplex **out);

/**
 * The total cofiber of a square diagram.
 *
 * # Safety
 * `d` must come from this library; `out` must be valid.
 */
int dv_total_cofiber(const struct DvDiagram *d, struct DvComplex **out);

/**
 * Whether a square diagram is cocartesian (1) or not (0), written to `out`.
 *
 * # Safety
 * `d` must come from this library; `out` must be valid.
 */
int dv_is_cocartesian(const struct DvDiagram *d, int *out);

/**
 * Whether a square diagram is cartesian.
 *
 * # Safety
 * `d` must come from this library; `out` must be valid.
 */
int dv_is_cartesian(const struct DvDiagram *d, int *out);

/**
 * Apply a named operation (as in the command line `compute` subcommand) to
 * a JSON input, returning the JSON result. `window` parameterizes
 * Barratt-Puppe windows, `k` the degree shift; both are ignored elsewhere.
 *
 * # Safety
 * `op` and `json` must be NUL-terminated strings, `out` a valid pointer.
 */
int dv_compute(const char *op, const char *json, uint32_t window, int32_t k, char **out);

/**
 * Run a verification suite and return the deterministic JSON report.
 * Returns 0 when every check passed, 1 when some check failed, 2 on bad
 * input. `primes` may be NULL for the default set {2, 3, 7}, otherwise a
 * comma-separated list.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `primes` NULL or the same;
 * `out` a valid pointer.
 */
int dv_run_suite(const char *suite,
                 uint64_t seed,
                 uintptr_t trials,
                 uintptr_t budget,
                 const char *primes,
                 char **out);

#endif  /* DERIVATOR_H */

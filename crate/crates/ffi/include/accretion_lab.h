#ifndef ACCRETION_LAB_H
#define ACCRETION_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AlStatus {
  AL_STATUS_OK = 0,
  AL_STATUS_NULL_ARGUMENT = 1,
  AL_STATUS_INVALID_UTF8 = 2,
  AL_STATUS_PARSE_ERROR = 3,
  AL_STATUS_INVALID_INPUT = 4,
  AL_STATUS_EVALUATION_FAILED = 5,
  AL_STATUS_PANIC = 6,
} AlStatus;

typedef enum AlSetOp {
  AL_SET_OP_UNION = 0,
  AL_SET_OP_INTERSECTION = 1,
  AL_SET_OP_DIFFERENCE = 2,
} AlSetOp;

typedef enum AlSetUnary {
  AL_SET_UNARY_COMPLEMENT = 0,
  AL_SET_UNARY_CLOSURE = 1,
  AL_SET_UNARY_INTERIOR = 2,
  AL_SET_UNARY_BOUNDARY = 3,
} AlSetUnary;

/*
 Parsed function of one variable with its domain.
 */
typedef struct AlFunction AlFunction;

/*
 Finite union of intervals with rational endpoints.
 */
typedef struct AlSet AlSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Owned by the
 library; valid until the next call.
 */
const char *al_last_error(void);

/*
 # Safety
 `s` must come from this library, or be null.
 */
void al_string_free(char *s);

/*
 Parse a set expression such as `"[0,1] U {3}"`.

 # Safety
 `expr` must be a nul-terminated string; `out` must be writable.
 */
enum AlStatus al_set_parse(const char *expr, struct AlSet **out);

/*
 # Safety
 `set` must come from this library, or be null.
 */
void al_set_free(struct AlSet *set);

/*
 # Safety
 `a` and `b` must be live handles; `out` must be writable.
 */
enum AlStatus al_set_binary(const struct AlSet *a,
                            const struct AlSet *b,
                            enum AlSetOp op,
                            struct AlSet **out);

/*
 # Safety
 `set` must be a live handle; `out` must be writable.
 */
enum AlStatus al_set_unary(const struct AlSet *set, enum AlSetUnary op, struct AlSet **out);

/*
 # Safety
 `set` must be a live handle, `x` a nul-terminated rational, `out` writable.
 */
enum AlStatus al_set_contains(const struct AlSet *set, const char *x, bool *out);

/*
 Canonical text form of the set.

 # Safety
 `set` must be a live handle; `out` must be writable.
 */
enum AlStatus al_set_to_string(const struct AlSet *set, char **out);

/*
 JSON object with `is_open`, `is_closed`, `is_bounded`, `sup`, `inf`.

 # Safety
 `set` must be a live handle; `out` must be writable.
 */
enum AlStatus al_set_topology_json(const struct AlSet *set, char **out);

/*
 Parse a function, e.g. `"thomae(x)"`. `domain` is a set expression or
 null for the default domain.

 # Safety
 `src` must be nul-terminated, `domain` nul-terminated or null, `out` writable.
 */
enum AlStatus al_function_parse(const char *src, const char *domain, struct AlFunction **out);

/*
 # Safety
 `f` must come from this library, or be null.
 */
void al_function_free(struct AlFunction *f);

/*
 Weighted-sum integral over `[a, b]`; writes the verdict summary as JSON.

 # Safety
 `f` must be a live handle, `a`, `b`, `eps` nul-terminated rationals, `out` writable.
 */
enum AlStatus al_integrate_json(const struct AlFunction *f,
                                const char *a,
                                const char *b,
                                const char *eps,
                                uint32_t max_depth,
                                char **out);

/*
 Full sequence report. `spec` is catalog JSON such as
 `{"kind":"formula","expr":"1/n"}`; `schedule` is JSON or null.

 # Safety
 `spec` must be nul-terminated, `schedule` nul-terminated or null, `out` writable.
 */
enum AlStatus al_sequence_analyze_json(const char *spec, const char *schedule, char **out);

/*
 Function accretion for a JSON query (`f`, `c`, optional `B`, `eps`,
 ...). With `limit` nonzero, reports the accretion limit instead.

 # Safety
 `query` must be nul-terminated; `out` writable.
 */
enum AlStatus al_fnacc_json(const char *query, int limit, char **out);

/*
 Run the command-line front end on `argv[0..argc]` (without the program
 name). Captures standard output into `out` and the exit code into
 `exit_code`; diagnostics go to `al_last_error` when the code is nonzero.

 # Safety
 `argv` must hold `argc` nul-terminated strings; `out` and `exit_code` writable.
 */
enum AlStatus al_cli_run(int argc, const char *const *argv, char **out, int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ACCRETION_LAB_H */

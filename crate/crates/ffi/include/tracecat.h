#ifndef TRACECAT_H
#define TRACECAT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_ARGUMENT = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_PARSE = 3,
  TC_STATUS_JSON = 4,
  TC_STATUS_SHAPE = 5,
  TC_STATUS_VALIDATION = 6,
  TC_STATUS_UNBOUND = 7,
  TC_STATUS_UNSUPPORTED = 8,
  TC_STATUS_SINGULAR = 9,
  TC_STATUS_DIVERGENCE = 10,
  TC_STATUS_PANIC = 11,
} TcStatus;

// A morphism of any instance.
typedef struct TcMorph TcMorph;

// A finite-state transducer.
typedef struct TcTransducer TcTransducer;

// A parsed workspace: an instance, named objects and generators.
typedef struct TcWorkspace TcWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *tc_version(void);

// The message for the last failed call on this thread, or null. The
// returned string must be released with [`tc_string_free`].
char *tc_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void tc_string_free(char *s);

// Parses a workspace document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum TcStatus tc_workspace_from_json(const char *json, struct TcWorkspace **out);

// # Safety
// `ws` must be null or a workspace handle not yet freed.
void tc_workspace_free(struct TcWorkspace *ws);

// Writes the type of `term` as `"dom -> cod"`.
//
// # Safety
// `ws` must be a live workspace handle, `term` a NUL-terminated string and
// `out` valid for writes.
enum TcStatus tc_workspace_shape(const struct TcWorkspace *ws, const char *term, char **out);

// Evaluates `term` in the workspace's instance.
//
// # Safety
// `ws` must be a live workspace handle, `term` a NUL-terminated string and
// `out` valid for writes.
enum TcStatus tc_workspace_eval(const struct TcWorkspace *ws,
                                const char *term,
                                struct TcMorph **out);

// # Safety
// `m` must be null or a morphism handle not yet freed.
void tc_morph_free(struct TcMorph *m);

// The morphism as a JSON document (sorted keys, 17 significant digits).
//
// # Safety
// `m` must be a live morphism handle and `out` valid for writes.
enum TcStatus tc_morph_to_json(const struct TcMorph *m, char **out);

// The morphism in the CLI's text format.
//
// # Safety
// `m` must be a live morphism handle and `out` valid for writes.
enum TcStatus tc_morph_to_text(const struct TcMorph *m, char **out);

// Parses a standalone transducer document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum TcStatus tc_transducer_from_json(const char *json, struct TcTransducer **out);

// # Safety
// `t` must be null or a transducer handle not yet freed.
void tc_transducer_free(struct TcTransducer *t);

// Decides whether two transducers denote the same resumption. When they
// differ and `witness` is non-null, a shortest separating input word is
// written there as space-separated labels; otherwise it is set to null.
//
// # Safety
// `a` and `b` must be live transducer handles, `equivalent` valid for
// writes, and `witness` null or valid for writes.
enum TcStatus tc_transducer_bisim(const struct TcTransducer *a,
                                  const struct TcTransducer *b,
                                  bool *equivalent,
                                  char **witness);

// The minimal transducer equivalent to `t`.
//
// # Safety
// `t` must be a live transducer handle and `out` valid for writes.
enum TcStatus tc_transducer_minimize(const struct TcTransducer *t, struct TcTransducer **out);

// Number of states of `t`, or 0 for a null handle.
//
// # Safety
// `t` must be null or a live transducer handle.
size_t tc_transducer_num_states(const struct TcTransducer *t);

// Checks the seven trace axioms on `instance` (`pfn`, `pinj`, `rel`,
// `stoch`, `cpo` or `transducer`) and writes the number of failing axioms.
// A summary line per axiom goes to the last-error slot when any fail.
//
// # Safety
// `instance` must be a NUL-terminated string and `failed` valid for writes.
enum TcStatus tc_check_axioms(const char *instance, size_t samples, uint64_t seed, size_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRACECAT_H */

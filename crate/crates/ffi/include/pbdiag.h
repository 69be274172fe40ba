#ifndef PBDIAG_H
#define PBDIAG_H

/* Generated by cbindgen from pbdiag-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * IIS minimization method selector.
 */
typedef enum {
  /**
   * Conflict-set extraction followed by QuickXplain over the core.
   */
  PBD_METHOD_CSEA_QX = 0,
  /**
   * QuickXplain over the full constraint set.
   */
  PBD_METHOD_QX = 1,
  /**
   * Deletion filter.
   */
  PBD_METHOD_DELETION = 2,
  /**
   * Additive growth followed by a deletion pass.
   */
  PBD_METHOD_ADDITIVE = 3,
} PbdMethod;

/**
 * Status code returned by every fallible entry point.
 */
typedef enum {
  /**
   * Success.
   */
  PBD_STATUS_OK = 0,
  /**
   * Model text failed to parse; see `pbd_last_error`.
   */
  PBD_STATUS_PARSE_ERROR = 1,
  /**
   * A null pointer or out-of-range argument was passed.
   */
  PBD_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The model is feasible, so there is nothing to diagnose.
   */
  PBD_STATUS_FEASIBLE = 3,
  /**
   * The time limit expired before the operation finished.
   */
  PBD_STATUS_TIMEOUT = 4,
  /**
   * Unexpected internal failure; see `pbd_last_error`.
   */
  PBD_STATUS_INTERNAL_ERROR = 5,
} PbdStatus;

/**
 * Opaque IIS result: names plus method metadata.
 */
typedef struct PbdIis PbdIis;

/**
 * Opaque parsed model handle.
 */
typedef struct PbdModel PbdModel;

/**
 * Opaque list of constraint names.
 */
typedef struct PbdNames PbdNames;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or null.
 * The pointer is valid until the next failing call on the same thread.
 */
const char *pbd_last_error(void);

/**
 * Library version as a static string.
 */
const char *pbd_version(void);

/**
 * Parses model text (JSON or OPB) into a new handle. On success writes the
 * handle through `out_model`; free it with `pbd_model_free`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out_model` a valid
 * pointer.
 */
PbdStatus pbd_model_parse(const char *text, PbdModel **out_model);

/**
 * Releases a model handle. Null is ignored.
 *
 * # Safety
 * `model` must have come from `pbd_model_parse` and not been freed.
 */
void pbd_model_free(PbdModel *model);

/**
 * Number of variables in the model; 0 for a null handle.
 *
 * # Safety
 * `model` must be a live handle or null.
 */
uint32_t pbd_model_num_vars(const PbdModel *model);

/**
 * Number of constraints in the model; 0 for a null handle.
 *
 * # Safety
 * `model` must be a live handle or null.
 */
uint32_t pbd_model_num_constraints(const PbdModel *model);

/**
 * Decides feasibility. Writes true/false through `out_sat` on `Ok`;
 * `time_limit_ms` of 0 means no limit.
 *
 * # Safety
 * `model` must be a live handle and `out_sat` a valid pointer.
 */
PbdStatus pbd_check(const PbdModel *model, uint64_t time_limit_ms, bool learning, bool *out_sat);

/**
 * Extracts the conflict core of an infeasible model as a name list.
 * Returns `Feasible` (and writes nothing) when the model is satisfiable.
 *
 * # Safety
 * `model` must be a live handle and `out_core` a valid pointer.
 */
PbdStatus pbd_extract_core(const PbdModel *model,
                           uint64_t time_limit_ms,
                           bool learning,
                           PbdNames **out_core);

/**
 * Minimizes the model's infeasibility to an IIS with the chosen method and
 * verifies it. Returns `Feasible` for satisfiable models.
 *
 * # Safety
 * `model` must be a live handle and `out_iis` a valid pointer.
 */
PbdStatus pbd_find_iis(const PbdModel *model,
                       PbdMethod method,
                       uint64_t time_limit_ms,
                       bool memoize,
                       PbdIis **out_iis);

/**
 * Number of names in the list; 0 for null.
 *
 * # Safety
 * `names` must be a live handle or null.
 */
size_t pbd_names_len(const PbdNames *names);

/**
 * Borrowed pointer to the name at `index`, or null when out of range. The
 * pointer is valid while the list handle lives.
 *
 * # Safety
 * `names` must be a live handle or null.
 */
const char *pbd_names_get(const PbdNames *names, size_t index);

/**
 * Releases a name list. Null is ignored.
 *
 * # Safety
 * `names` must have come from `pbd_extract_core` and not been freed.
 */
void pbd_names_free(PbdNames *names);

/**
 * Borrowed view of the IIS member names; owned by the IIS handle.
 *
 * # Safety
 * `iis` must be a live handle or null.
 */
const PbdNames *pbd_iis_names(const PbdIis *iis);

/**
 * Oracle calls spent by the minimization phase.
 *
 * # Safety
 * `iis` must be a live handle or null.
 */
uint64_t pbd_iis_oracle_calls(const PbdIis *iis);

/**
 * Wall time of the whole diagnosis in milliseconds.
 *
 * # Safety
 * `iis` must be a live handle or null.
 */
double pbd_iis_time_ms(const PbdIis *iis);

/**
 * Whether the result passed the minimality verification.
 *
 * # Safety
 * `iis` must be a live handle or null.
 */
bool pbd_iis_verified(const PbdIis *iis);

/**
 * Serializes the IIS result to a JSON string owned by the caller; free it
 * with `pbd_string_free`. Returns null for a null handle.
 *
 * # Safety
 * `iis` must be a live handle or null.
 */
char *pbd_iis_to_json(const PbdIis *iis);

/**
 * Releases an IIS handle. Null is ignored.
 *
 * # Safety
 * `iis` must have come from `pbd_find_iis` and not been freed.
 */
void pbd_iis_free(PbdIis *iis);

/**
 * Releases a string returned by `pbd_iis_to_json`. Null is ignored.
 *
 * # Safety
 * `s` must have come from this library and not been freed.
 */
void pbd_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PBDIAG_H */

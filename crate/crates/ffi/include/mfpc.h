#ifndef MFPC_H
#define MFPC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Solution quality, mirroring the CSV `status` column.
 */
typedef enum MfpcSolveStatus {
  MFPC_SOLVE_STATUS_OPTIMAL = 0,
  MFPC_SOLVE_STATUS_FEASIBLE = 1,
  MFPC_SOLVE_STATUS_INFEASIBLE_NONZERO = 2,
} MfpcSolveStatus;

/**
 * Result code of every fallible call.
 */
typedef enum MfpcStatus {
  MFPC_STATUS_OK = 0,
  MFPC_STATUS_NULL_POINTER = 1,
  MFPC_STATUS_INVALID_UTF8 = 2,
  MFPC_STATUS_PARSE_ERROR = 3,
  MFPC_STATUS_INVALID_ARGUMENT = 4,
  MFPC_STATUS_DIMENSION_MISMATCH = 5,
  MFPC_STATUS_PANIC = 6,
} MfpcStatus;

/**
 * Opaque instance handle.
 */
typedef struct MfpcInstance MfpcInstance;

/**
 * Opaque solution handle: a flow assignment with the bounds that produced it.
 */
typedef struct MfpcSolution MfpcSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *mfpc_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void mfpc_string_free(char *s);

/**
 * Parse an instance from its text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum MfpcStatus mfpc_instance_parse(const char *text, struct MfpcInstance **out);

/**
 * Generate a random instance. `regime` is 1 (capacities 10..=15) or 2 (15..=20).
 *
 * # Safety
 * `out` must be writable.
 */
enum MfpcStatus mfpc_instance_generate(size_t nodes,
                                       double arc_density,
                                       double conflict_density,
                                       uint8_t regime,
                                       uint64_t seed,
                                       struct MfpcInstance **out);

/**
 * # Safety
 * `inst` must be null or a handle from this library, not yet freed.
 */
void mfpc_instance_free(struct MfpcInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle.
 */
size_t mfpc_instance_node_count(const struct MfpcInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle.
 */
size_t mfpc_instance_arc_count(const struct MfpcInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle.
 */
size_t mfpc_instance_conflict_count(const struct MfpcInstance *inst);

/**
 * Instance text format. Free the result with `mfpc_string_free`.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum MfpcStatus mfpc_instance_serialize(const struct MfpcInstance *inst, char **out);

/**
 * MILP model in LP format. Free the result with `mfpc_string_free`.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum MfpcStatus mfpc_export_lp(const struct MfpcInstance *inst, char **out);

/**
 * Exact branch-and-bound. `node_limit` 0 means unlimited.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum MfpcStatus mfpc_solve_bnb(const struct MfpcInstance *inst,
                               double time_limit_secs,
                               uint64_t node_limit,
                               struct MfpcSolution **out);

/**
 * Greedy heuristic. The upper bound reported is the max-flow relaxation.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum MfpcStatus mfpc_solve_greedy(const struct MfpcInstance *inst,
                                  uint64_t seed,
                                  uint32_t restarts,
                                  struct MfpcSolution **out);

/**
 * Read a solution file body for an instance with `arc_count` arcs. Bounds
 * are both set to the declared total; status is `Feasible`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum MfpcStatus mfpc_solution_parse(const char *text, size_t arc_count, struct MfpcSolution **out);

/**
 * # Safety
 * `sol` must be null or a handle from this library, not yet freed.
 */
void mfpc_solution_free(struct MfpcSolution *sol);

/**
 * Total flow of the assignment.
 *
 * # Safety
 * `sol` must be a live handle.
 */
uint64_t mfpc_solution_value(const struct MfpcSolution *sol);

/**
 * # Safety
 * `sol` must be a live handle.
 */
size_t mfpc_solution_arc_count(const struct MfpcSolution *sol);

/**
 * Bounds, status and work done: search nodes for branch-and-bound,
 * restarts for greedy, 0 for parsed solutions.
 *
 * # Safety
 * `sol` must be a live handle; the out-pointers must be writable.
 */
enum MfpcStatus mfpc_solution_summary(const struct MfpcSolution *sol,
                                      uint64_t *lower,
                                      uint64_t *upper,
                                      enum MfpcSolveStatus *status,
                                      uint64_t *nodes);

/**
 * Copy per-arc flows into `buf`, which must hold exactly the arc count.
 *
 * # Safety
 * `sol` must be a live handle; `buf` must point to `len` writable values.
 */
enum MfpcStatus mfpc_solution_flows(const struct MfpcSolution *sol, uint64_t *buf, size_t len);

/**
 * Solution file text. Free the result with `mfpc_string_free`.
 *
 * # Safety
 * `sol` must be a live handle; `out` must be writable.
 */
enum MfpcStatus mfpc_solution_serialize(const struct MfpcSolution *sol, char **out);

/**
 * Run the feasibility checker; `violations` receives the number of
 * violated constraints (0 means feasible).
 *
 * # Safety
 * Handles must be live; `violations` must be writable.
 */
enum MfpcStatus mfpc_check_feasible(const struct MfpcInstance *inst,
                                    const struct MfpcSolution *sol,
                                    size_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MFPC_H */

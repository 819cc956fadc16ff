/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef RYUO_H
#define RYUO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Largest coordinate accepted where an oracle table is needed.
 */
#define RYUO_ORACLE_MAX 4096

typedef enum RyuoStatus {
  RYUO_STATUS_OK = 0,
  RYUO_STATUS_NULL_POINTER = 1,
  RYUO_STATUS_INVALID_UTF8 = 2,
  RYUO_STATUS_INVALID_RULES = 3,
  RYUO_STATUS_INVALID_ARGUMENT = 4,
  RYUO_STATUS_DIMENSION_MISMATCH = 5,
  /**
   * Plain call on the pass game or pass call on a plain game.
   */
  RYUO_STATUS_WRONG_OPERATION = 6,
  RYUO_STATUS_NO_CLOSED_FORM = 7,
  RYUO_STATUS_UNSUPPORTED = 8,
  /**
   * Overflow, or a region beyond the oracle cap.
   */
  RYUO_STATUS_OUT_OF_RANGE = 9,
  RYUO_STATUS_TERMINAL = 10,
  RYUO_STATUS_BUFFER_TOO_SMALL = 11,
  RYUO_STATUS_PANIC = 12,
} RyuoStatus;

typedef enum RyuoOutcome {
  RYUO_OUTCOME_P = 0,
  RYUO_OUTCOME_N = 1,
} RyuoOutcome;

/**
 * Legal options of one position, in lexicographic order.
 */
typedef struct RyuoMoves RyuoMoves;

/**
 * A validated rule set.
 */
typedef struct RyuoRules RyuoRules;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a rule set. `variant` is one of `ryuo`, `pass-ryuo`,
 * `restricted-side`, `restricted-hv`, `3dim`, `3dim-modified`, `ndim`.
 * Parameters a variant does not use are ignored; 0 means absent.
 *
 * # Safety
 * `variant` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RyuoStatus ryuo_rules_new(const char *variant,
                               uint64_t p,
                               uint64_t q,
                               uint64_t r,
                               uint64_t n,
                               struct RyuoRules **out);

/**
 * # Safety
 * `rules` must come from [`ryuo_rules_new`] and not be freed twice. Null is
 * ignored.
 */
void ryuo_rules_free(struct RyuoRules *rules);

/**
 * Number of coordinates of a position; 2 for the pass game.
 *
 * # Safety
 * `rules` must be a live handle or null; `out` must be valid.
 */
enum RyuoStatus ryuo_rules_dimension(const struct RyuoRules *rules, size_t *out);

/**
 * Whether the variant has a closed-form Grundy value.
 *
 * # Safety
 * As [`ryuo_rules_dimension`].
 */
enum RyuoStatus ryuo_rules_has_closed_form(const struct RyuoRules *rules, bool *out);

/**
 * Closed-form Grundy value; `NoClosedForm` for variants without one.
 *
 * # Safety
 * `coords` must point to `len` values; other pointers as above.
 */
enum RyuoStatus ryuo_grundy(const struct RyuoRules *rules,
                            const uint64_t *coords,
                            size_t len,
                            uint64_t *out);

/**
 * Grundy value from the brute-force oracle over the box enclosing the
 * position. Coordinates are capped at [`RYUO_ORACLE_MAX`].
 *
 * # Safety
 * As [`ryuo_grundy`].
 */
enum RyuoStatus ryuo_grundy_oracle(const struct RyuoRules *rules,
                                   const uint64_t *coords,
                                   size_t len,
                                   uint64_t *out);

/**
 * P or N for a position of any plain variant.
 *
 * # Safety
 * As [`ryuo_grundy`].
 */
enum RyuoStatus ryuo_outcome(const struct RyuoRules *rules,
                             const uint64_t *coords,
                             size_t len,
                             enum RyuoOutcome *out);

/**
 * P or N for a state of the pass game.
 *
 * # Safety
 * As [`ryuo_rules_dimension`].
 */
enum RyuoStatus ryuo_pass_outcome(const struct RyuoRules *rules,
                                  uint64_t x,
                                  uint64_t y,
                                  bool pass,
                                  enum RyuoOutcome *out);

/**
 * The engine's reply: the first winning option, else the smallest option.
 * `out_coords` receives `len` values. `Terminal` when no move exists.
 *
 * # Safety
 * `coords` and `out_coords` must each hold `len` values.
 */
enum RyuoStatus ryuo_engine_move(const struct RyuoRules *rules,
                                 const uint64_t *coords,
                                 size_t len,
                                 uint64_t *out_coords,
                                 bool *out_winning);

/**
 * Engine reply in the pass game.
 *
 * # Safety
 * All out pointers must be valid.
 */
enum RyuoStatus ryuo_pass_engine_move(const struct RyuoRules *rules,
                                      uint64_t x,
                                      uint64_t y,
                                      bool pass,
                                      uint64_t *out_x,
                                      uint64_t *out_y,
                                      bool *out_pass,
                                      bool *out_winning);

/**
 * All legal options of a plain position.
 *
 * # Safety
 * As [`ryuo_grundy`]; `out` receives a handle for [`ryuo_moves_free`].
 */
enum RyuoStatus ryuo_moves(const struct RyuoRules *rules,
                           const uint64_t *coords,
                           size_t len,
                           struct RyuoMoves **out);

/**
 * All legal options of a pass game state.
 *
 * # Safety
 * As [`ryuo_moves`].
 */
enum RyuoStatus ryuo_pass_moves(const struct RyuoRules *rules,
                                uint64_t x,
                                uint64_t y,
                                bool pass,
                                struct RyuoMoves **out);

/**
 * Number of options in the list; 0 for null.
 *
 * # Safety
 * `moves` must be a live handle or null.
 */
size_t ryuo_moves_len(const struct RyuoMoves *moves);

/**
 * Copies option `index` into `out_coords` (capacity `cap`). `out_pass` may
 * be null; for pass game lists it receives the option's pass flag.
 *
 * # Safety
 * `out_coords` must hold `cap` values.
 */
enum RyuoStatus ryuo_moves_get(const struct RyuoMoves *moves,
                               size_t index,
                               uint64_t *out_coords,
                               size_t cap,
                               bool *out_pass);

/**
 * # Safety
 * `moves` must come from [`ryuo_moves`] or [`ryuo_pass_moves`] and not be
 * freed twice. Null is ignored.
 */
void ryuo_moves_free(struct RyuoMoves *moves);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *ryuo_last_error(void);

/**
 * Static name of a status code.
 */
const char *ryuo_status_name(enum RyuoStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RYUO_H */

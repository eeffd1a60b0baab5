#ifndef ANM_H
#define ANM_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum AnmStatus {
  ANM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ANM_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  ANM_STATUS_INVALID_UTF8 = 2,
  /**
   * A text or JSON argument did not parse.
   */
  ANM_STATUS_PARSE = 3,
  /**
   * The arguments parsed but violate a precondition.
   */
  ANM_STATUS_INVALID = 4,
  /**
   * The request exceeds a size limit.
   */
  ANM_STATUS_TOO_LARGE = 5,
  /**
   * An internal error; the message is in [`anm_last_error`].
   */
  ANM_STATUS_PANIC = 6,
} AnmStatus;

/**
 * Which construction of the cotopology to use.
 */
typedef enum AnmCotMethod {
  ANM_COT_METHOD_FORMULA = 0,
  ANM_COT_METHOD_BRUTE = 1,
} AnmCotMethod;

/**
 * How a budgeted run ended.
 */
typedef enum AnmOutcome {
  ANM_OUTCOME_HALTS = 0,
  ANM_OUTCOME_OUT_OF_BUDGET = 1,
  ANM_OUTCOME_ORACLE_FAULT = 2,
  /**
   * Halted with a value too large for 64 bits.
   */
  ANM_OUTCOME_HALTS_LARGE = 3,
} AnmOutcome;

/**
 * Verdict of an exhaustive verification.
 */
typedef enum AnmVerdict {
  ANM_VERDICT_WIN = 0,
  ANM_VERDICT_LOSE = 1,
  ANM_VERDICT_UNKNOWN = 2,
} AnmVerdict;

/**
 * Classification of a pair by the checker decider.
 */
typedef enum AnmChecker {
  /**
   * `(x, y)` lies in `P × Q`.
   */
  ANM_CHECKER_IN_P_TIMES_Q = 0,
  /**
   * `(x, y)` lies in `Q × P`.
   */
  ANM_CHECKER_IN_Q_TIMES_P = 1,
  ANM_CHECKER_UNKNOWN = 2,
} AnmChecker;

/**
 * A finite frame.
 */
typedef struct AnmFrame AnmFrame;

/**
 * A machine program.
 */
typedef struct AnmProgram AnmProgram;

/**
 * A built-in witness strategy with the reduction it wins.
 */
typedef struct AnmWitness AnmWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The library version as a static string.
 */
const char *anm_version(void);

/**
 * The message of the last failed call on this thread, or null.
 * The pointer stays valid until the next call on this thread.
 */
const char *anm_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void anm_string_free(char *s);

/**
 * Parse a frame from JSON (`{"elements", "leq", "names"?}` or `{"poset": covers}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for one write.
 */
enum AnmStatus anm_frame_parse(const char *json, struct AnmFrame **out);

/**
 * The five-element frame of down-sets of `{p, q < t}`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum AnmStatus anm_frame_five_element(struct AnmFrame **out);

/**
 * Release a frame.
 *
 * # Safety
 * `frame` must be null or a handle from this library, not yet freed.
 */
void anm_frame_free(struct AnmFrame *frame);

/**
 * Number of elements of the frame.
 *
 * # Safety
 * `frame` must be a live handle; `out` must be valid for one write.
 */
enum AnmStatus anm_frame_len(const struct AnmFrame *frame, uintptr_t *out);

/**
 * The frame as JSON.
 *
 * # Safety
 * `frame` must be a live handle; `out` must be valid for one write.
 */
enum AnmStatus anm_frame_to_json(const struct AnmFrame *frame, char **out);

/**
 * Whether the element map `map[0..len]` is a nucleus. `len` must equal the
 * frame size; on `false` the violated law is in [`anm_last_error`].
 *
 * # Safety
 * `frame` must be a live handle; `map` valid for `len` reads; `out` for one write.
 */
enum AnmStatus anm_frame_is_nucleus(const struct AnmFrame *frame,
                                    const uintptr_t *map,
                                    uintptr_t len,
                                    bool *out);

/**
 * Number of nuclei on the frame (frames of at most 16 elements).
 *
 * # Safety
 * `frame` must be a live handle; `out` must be valid for one write.
 */
enum AnmStatus anm_frame_nucleus_count(const struct AnmFrame *frame, uintptr_t *out);

/**
 * The cotopology of the nucleus `j[0..len]`, written to `out[0..len]`.
 *
 * # Safety
 * `frame` must be a live handle; `j` valid for `len` reads; `out` for `len` writes.
 */
enum AnmStatus anm_frame_cot(const struct AnmFrame *frame,
                             const uintptr_t *j,
                             uintptr_t len,
                             enum AnmCotMethod method,
                             uintptr_t *out);

/**
 * A nucleus `j[0..len]` as a JSON table keyed by element names.
 *
 * # Safety
 * `frame` must be a live handle; `j` valid for `len` reads; `out` for one write.
 */
enum AnmStatus anm_frame_nucleus_json(const struct AnmFrame *frame,
                                      const uintptr_t *j,
                                      uintptr_t len,
                                      char **out);

/**
 * Parse a program from assembly text or a decimal code.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be valid for one write.
 */
enum AnmStatus anm_program_parse(const char *source, struct AnmProgram **out);

/**
 * Release a program.
 *
 * # Safety
 * `program` must be null or a handle from this library, not yet freed.
 */
void anm_program_free(struct AnmProgram *program);

/**
 * The program's code as a decimal string.
 *
 * # Safety
 * `program` must be a live handle; `out` must be valid for one write.
 */
enum AnmStatus anm_program_code(const struct AnmProgram *program, char **out);

/**
 * Run the program without an oracle on `input` for at most `budget` steps.
 * `value` receives the result when the outcome is [`AnmOutcome::Halts`].
 *
 * # Safety
 * `program` must be a live handle; `outcome` and `value` valid for one write.
 */
enum AnmStatus anm_program_run(const struct AnmProgram *program,
                               uint64_t input,
                               uint64_t budget,
                               enum AnmOutcome *outcome,
                               uint64_t *value);

/**
 * Build the registry witness `name` at the given universe size.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be valid for one write.
 */
enum AnmStatus anm_witness_new(const char *name, uint64_t universe, struct AnmWitness **out);

/**
 * Release a witness.
 *
 * # Safety
 * `witness` must be null or a handle from this library, not yet freed.
 */
void anm_witness_free(struct AnmWitness *witness);

/**
 * Exhaustively verify the witness at its recommended bounds.
 *
 * # Safety
 * `witness` must be a live handle; `out` must be valid for one write.
 */
enum AnmStatus anm_witness_verify(const struct AnmWitness *witness, enum AnmVerdict *out);

/**
 * A description of the construction the witness implements.
 *
 * # Safety
 * `witness` must be a live handle; `out` must be valid for one write.
 */
enum AnmStatus anm_witness_provenance(const struct AnmWitness *witness, char **out);

/**
 * Classify `(x, y)` for the checker problem of `(P, Q)` with the
 * decided-coding strategy, trying fragments up to `fragment_max`.
 *
 * # Safety
 * `p` and `q` must be valid for `p_len`/`q_len` reads; `out` for one write.
 */
enum AnmStatus anm_decide_checker(const uint64_t *p,
                                  uintptr_t p_len,
                                  const uint64_t *q,
                                  uintptr_t q_len,
                                  uint64_t x,
                                  uint64_t y,
                                  uintptr_t fragment_max,
                                  uint64_t budget,
                                  enum AnmChecker *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANM_H */

/* SPDX-License-Identifier: MIT */

#ifndef SELFEQ_H
#define SELFEQ_H

/* Generated by cbindgen from the selfeq-ffi crate sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a fallible library call.
//
// The numeric values match the exit codes of the `selfeq` binary.
typedef enum {
  // The call succeeded.
  SELFEQ_STATUS_OK = 0,
  // The input was malformed: unknown name, unparsable block, wrong
  // argument count, null pointer, invalid UTF-8.
  SELFEQ_STATUS_INPUT = 1,
  // The input was understood but lies outside the engine's scope.
  SELFEQ_STATUS_UNSUPPORTED = 2,
  // An internal invariant failed; please report.
  SELFEQ_STATUS_INTERNAL = 3,
} SelfeqStatus;

// Opaque handle to a differential graded Lie model of a finite complex.
//
// Created by [`selfeq_model_builtin`] or [`selfeq_model_parse`], released
// by [`selfeq_model_free`].  Handles are immutable and safe to share
// across threads for reads.
typedef struct SelfeqModel SelfeqModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the engine version as a static string.  Do not free it.
const char *selfeq_version(void);

// Returns the message of the last failed call on this thread, or an empty
// string when the most recent fallible call succeeded.
//
// The pointer stays owned by the library and is valid until the next
// fallible call on the same thread.  Do not free it.
const char *selfeq_last_error(void);

// Builds the model of a built-in space: `S2`…`S12`, `CP2`…`CP5`,
// `three-cell(a,b)`, `four-cell(a,b,c)`, `four-attach(a,b)`,
// `mimura-toda(a,b,c)`, or `wedge(S3,S5,...)`.
//
// Returns NULL on failure; [`selfeq_last_error`] then describes the
// problem.  Release the handle with [`selfeq_model_free`].
//
// # Safety
//
// `name` must be a NUL-terminated string or NULL.
SelfeqModel *selfeq_model_builtin(const char *name);

// Parses a `space { ... }` block and builds its model.
//
// The text uses the same format the CLI accepts from files.  Algebra and
// Sullivan blocks are rejected here; feed those to [`selfeq_run_json`].
// Returns NULL on failure; release the handle with [`selfeq_model_free`].
//
// # Safety
//
// `text` must be a NUL-terminated string or NULL.
SelfeqModel *selfeq_model_parse(const char *text);

// Releases a model handle.  NULL is a no-op.
//
// # Safety
//
// `model` must be a pointer returned by this library that has not been
// freed already.
void selfeq_model_free(SelfeqModel *model);

// Returns the model's name as a fresh string; free it with
// [`selfeq_string_free`].  Returns NULL when `model` is NULL.
//
// # Safety
//
// `model` must be a live handle or NULL.
char *selfeq_model_name(const SelfeqModel *model);

// Returns the dimension of the top cell, or 0 when `model` is NULL.
//
// # Safety
//
// `model` must be a live handle or NULL.
uint32_t selfeq_model_top_dim(const SelfeqModel *model);

// Returns the number of cells (Lie generators), or 0 when `model` is NULL.
//
// # Safety
//
// `model` must be a live handle or NULL.
size_t selfeq_model_gen_count(const SelfeqModel *model);

// Returns true when every attaching map is rationally trivial, i.e. the
// space has the rational homotopy type of a wedge of spheres.
//
// # Safety
//
// `model` must be a live handle or NULL.
bool selfeq_model_is_wedge(const SelfeqModel *model);

// Returns the rank of the k-th rational homotopy group, or -1 when
// `model` is NULL or `k < 2`.
//
// # Safety
//
// `model` must be a live handle or NULL.
int64_t selfeq_model_pi_rank(const SelfeqModel *model, uint32_t k);

// Computes the rational self-closeness number of the model.
//
// On success writes the value, the verified enclosure `[lo, hi]`, and
// whether the value is certified (`lo == hi` with verified witnesses) to
// the non-NULL out pointers.  Out pointers may be NULL to skip a field.
//
// # Safety
//
// `model` must be a live handle; out pointers must be NULL or valid for a
// single write.
SelfeqStatus selfeq_model_nse(const SelfeqModel *model,
                              uint32_t *out_value,
                              uint32_t *out_lo,
                              uint32_t *out_hi,
                              bool *out_certified);

// Runs a CLI command and returns its machine-readable JSON report.
//
// `command` is any command the `selfeq` binary accepts (`nse`, `group`,
// `homology`, `cohomology`, `pd`, `csymplectic`, `formal`, `split`,
// `model`, `selfmaps`, `connsum`, `wedge`, `mimura-toda`, `examples`);
// `inputs` is an argv-style array of `n_inputs` pointers naming built-in
// examples or spec files.  Passing 0 for `max_degree` or `int_bound`
// selects the CLI defaults (16 and 100).  The JSON is byte-identical to
// `selfeq <command> <inputs...> --format machine`.
//
// On success writes a fresh string to `*out_json`; free it with
// [`selfeq_string_free`].  On failure leaves `*out_json` untouched and
// returns the status; [`selfeq_last_error`] carries the message.
//
// # Safety
//
// `command` must be NUL-terminated; `inputs` must point to `n_inputs`
// NUL-terminated strings (it may be NULL when `n_inputs` is 0);
// `out_json` must be valid for a single write.
SelfeqStatus selfeq_run_json(const char *command,
                             const char *const *inputs,
                             size_t n_inputs,
                             uint32_t max_degree,
                             uint64_t int_bound,
                             uint64_t seed,
                             char **out_json);

// Releases a string allocated by this library.  NULL is a no-op.
//
// # Safety
//
// `s` must be a pointer returned by this library that has not been freed
// already.
void selfeq_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SELFEQ_H */

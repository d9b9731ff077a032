/* Copyright 2026 The dfsgate Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef DFSGATE_H
#define DFSGATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum DfsgStatus {
  DFSG_STATUS_OK = 0,
  DFSG_STATUS_NULL_POINTER = 1,
  // Invalid or unsupported configuration.
  DFSG_STATUS_CONFIG = 2,
  // Numerical failure during construction or evolution.
  DFSG_STATUS_NUMERICAL = 3,
  // Optimizer stopped at the edge of its search interval.
  DFSG_STATUS_BOUNDARY = 4,
  // A string argument is not valid UTF-8.
  DFSG_STATUS_UTF8 = 5,
  // The library panicked; the handle involved should be discarded.
  DFSG_STATUS_PANIC = 6,
} DfsgStatus;

// Opaque simulator handle.
typedef struct DfsgSimulator DfsgSimulator;

// Outcome of a single gate run.
typedef struct DfsgGateResult {
  double fidelity;
  double infidelity;
  // Population outside the computational subspace.
  double leakage;
  double trace;
  double duration;
} DfsgGateResult;

// Effective two-level parameters of a driven Lambda system.
typedef struct DfsgTlsMapping {
  double omega_re;
  double omega_im;
  double gamma_1d;
  double gamma_star;
} DfsgTlsMapping;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a simulator for `n_atoms` emitters on a commensurate chain.
//
// # Safety
// `out` must be valid for writes.
enum DfsgStatus dfsg_simulator_new(size_t n_atoms,
                                   double gamma_1d,
                                   double gamma_star,
                                   struct DfsgSimulator **out);

// Creates a simulator from a JSON run configuration. Only the system fields
// (`n_atoms`, `gamma_1d`, `gamma_star` or `purcell`, `positions`,
// `prop_length`) are used.
//
// # Safety
// `json` must be a NUL-terminated string and `out` valid for writes.
enum DfsgStatus dfsg_simulator_new_json(const char *json, struct DfsgSimulator **out);

// Releases a simulator. Null is ignored.
//
// # Safety
// `sim` must come from `dfsg_simulator_new*` and not be used afterwards.
void dfsg_simulator_free(struct DfsgSimulator *sim);

// Dimension of the decoherence-free subspace of the simulator.
//
// # Safety
// `sim` must be a live handle and `out` valid for writes.
enum DfsgStatus dfsg_dfs_dimension(const struct DfsgSimulator *sim, size_t *out);

// Runs one gate on a logical state such as `"00"` or `"10+11"`.
//
// `gate` is a gate name or JSON gate spec. With a plain name the spec uses
// default targets and `coupling`. `method` is one of `full`,
// `effective_order1`, `effective_order2`, `no_jump`.
//
// # Safety
// String arguments must be NUL-terminated, `sim` live, `out` valid for writes.
enum DfsgStatus dfsg_gate_run(const struct DfsgSimulator *sim,
                              const char *gate,
                              double coupling,
                              const char *state,
                              const char *method,
                              struct DfsgGateResult *out);

// Like [`dfsg_gate_run`] with the initial state given as `len` complex
// amplitudes over the logical basis (qubit 1 is the most significant bit).
// The state is normalized internally.
//
// # Safety
// `re` and `im` must point to `len` doubles each.
enum DfsgStatus dfsg_gate_run_amplitudes(const struct DfsgSimulator *sim,
                                         const char *gate,
                                         double coupling,
                                         const double *re,
                                         const double *im,
                                         size_t len,
                                         const char *method,
                                         struct DfsgGateResult *out);

// Compiles a gate into its pulse schedule and returns it as JSON.
// Free the string with [`dfsg_string_free`].
//
// # Safety
// `gate` must be NUL-terminated, `sim` live, `out` valid for writes.
enum DfsgStatus dfsg_compile_gate_json(const struct DfsgSimulator *sim,
                                       const char *gate,
                                       double coupling,
                                       char **out);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void dfsg_string_free(char *s);

// Maps a far-detuned Lambda system onto an effective two-level emitter.
//
// # Safety
// `out` must be valid for writes.
enum DfsgStatus dfsg_lambda_to_tls(double omega_g_re,
                                   double omega_g_im,
                                   double omega_e_re,
                                   double omega_e_im,
                                   double delta,
                                   double gamma_1d,
                                   double gamma_star,
                                   struct DfsgTlsMapping *out);

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next library call on the same thread.
const char *dfsg_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *dfsg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DFSGATE_H */

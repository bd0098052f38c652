#ifndef GATECUT_H
#define GATECUT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Selection method for [`gc_select`].
 */
typedef enum GcMethod {
  GC_METHOD_TW2S = 0,
  GC_METHOD_STAGE1_ONLY = 1,
} GcMethod;

/**
 * Result code of every fallible call.
 */
typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_ARGUMENT = 1,
  GC_STATUS_INVALID_PARAM = 2,
  GC_STATUS_PARSE = 3,
  GC_STATUS_NO_TWO_QUBIT_GATES = 4,
  GC_STATUS_EMPTY_GRAPH = 5,
  GC_STATUS_DEVICE_TOO_SMALL = 6,
  GC_STATUS_OUT_OF_RANGE = 7,
  GC_STATUS_UNSUPPORTED = 8,
  GC_STATUS_IO = 9,
  GC_STATUS_INTERNAL = 10,
} GcStatus;

typedef enum GcTopology {
  GC_TOPOLOGY_CHAIN = 0,
  GC_TOPOLOGY_J1J2_RING = 1,
} GcTopology;

typedef struct GcCircuit GcCircuit;

typedef struct GcCoupling GcCoupling;

typedef struct GcGraph GcGraph;

typedef struct GcSelection GcSelection;

/**
 * Selector weights; [`gc_select_params_default`] fills the defaults.
 */
typedef struct GcSelectParams {
  size_t k;
  double alpha;
  double beta;
  double alpha2;
  double beta2;
} GcSelectParams;

/**
 * One shortlist entry.
 */
typedef struct GcCandidate {
  size_t u;
  size_t v;
  double score1;
  double bc;
  double dp;
  double score2;
} GcCandidate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *gc_last_error(void);

/**
 * Library version, statically allocated.
 */
const char *gc_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void gc_string_free(char *s);

/**
 * Parses the graph text format (`n m` header, one `u v` line per edge).
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_graph_parse(const char *text, struct GcGraph **out);

/**
 * Generates a benchmark graph from a JSON family spec such as
 * `{"family":"sbm","n_per":8,"communities":2,"p_in":0.5,"p_out":0.05,"seed":3}`.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_graph_generate(const char *spec_json, struct GcGraph **out);

/**
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_graph_node_count(const struct GcGraph *g, size_t *out);

/**
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_graph_edge_count(const struct GcGraph *g, size_t *out);

/**
 * Min-fill treewidth upper bound.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_graph_treewidth_upper_bound(const struct GcGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
void gc_graph_free(struct GcGraph *g);

/**
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_circuit_parse(const char *text, struct GcCircuit **out);

/**
 * One CX per edge, in ascending edge order.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_circuit_from_graph(const struct GcGraph *g, struct GcCircuit **out);

/**
 * Trotterised TFIM circuit with the default couplings of `topology`.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_circuit_tfim(enum GcTopology topology,
                              size_t n,
                              size_t trotter_steps,
                              struct GcCircuit **out);

/**
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_circuit_qubit_count(const struct GcCircuit *c, size_t *out);

/**
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_circuit_two_qubit_count(const struct GcCircuit *c, size_t *out);

/**
 * Circuit text; free with [`gc_string_free`].
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_circuit_emit(const struct GcCircuit *c, char **out);

/**
 * # Safety
 * `c` must be null or a live circuit handle.
 */
void gc_circuit_free(struct GcCircuit *c);

struct GcSelectParams gc_select_params_default(void);

/**
 * Runs the selector. `params` may be null for the defaults.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_select(const struct GcCircuit *c,
                        const struct GcSelectParams *params,
                        enum GcMethod method,
                        struct GcSelection **out);

/**
 * Uniformly random two-qubit gate, seeded.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_select_random(const struct GcCircuit *c, uint64_t seed, struct GcSelection **out);

/**
 * Chosen edge `(u, v)` with `u < v` and the position of the cut gate.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_selection_cut(const struct GcSelection *s,
                               size_t *u,
                               size_t *v,
                               size_t *gate_index);

/**
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_selection_shortlist_len(const struct GcSelection *s, size_t *out);

/**
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_selection_candidate(const struct GcSelection *s,
                                     size_t index,
                                     struct GcCandidate *out);

/**
 * Same JSON as the `select` command; free with [`gc_string_free`].
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_selection_to_json(const struct GcSelection *s, char **out);

/**
 * # Safety
 * `s` must be null or a live selection handle.
 */
void gc_selection_free(struct GcSelection *s);

/**
 * The 127-qubit heavy-hex device.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_coupling_eagle(struct GcCoupling **out);

/**
 * Heavy-hex lattice of odd code distance `d`.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_coupling_heavy_hex(size_t d, struct GcCoupling **out);

/**
 * Any connected graph as a device.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_coupling_from_graph(const struct GcGraph *g, struct GcCoupling **out);

/**
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_coupling_node_count(const struct GcCoupling *cm, size_t *out);

/**
 * # Safety
 * `cm` must be null or a live coupling handle.
 */
void gc_coupling_free(struct GcCoupling *cm);

/**
 * Mean routed ECR count over `n_seeds` routing seeds.
 *
 * # Safety
 * `seeds` must point to `n_seeds` values. See the crate documentation.
 */
enum GcStatus gc_ecr_count(const struct GcCircuit *c,
                           const struct GcCoupling *cm,
                           const uint64_t *seeds,
                           size_t n_seeds,
                           double *out);

/**
 * Routed ECR saving from deleting the gate at `position`.
 *
 * # Safety
 * `seeds` must point to `n_seeds` values. See the crate documentation.
 */
enum GcStatus gc_delta_ecr(const struct GcCircuit *c,
                           size_t position,
                           const struct GcCoupling *cm,
                           const uint64_t *seeds,
                           size_t n_seeds,
                           double *out);

/**
 * Breakeven shot count; `INFINITY` when `h_ideal` is zero.
 *
 * # Safety
 * See the crate documentation.
 */
enum GcStatus gc_m_star(double p,
                        double n,
                        double delta_n,
                        double sigma_h,
                        double h_ideal,
                        double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GATECUT_H */

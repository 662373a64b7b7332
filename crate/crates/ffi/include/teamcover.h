#ifndef TEAMCOVER_H
#define TEAMCOVER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Search over τ: linear scan.
 */
#define TC_SEARCH_LINEAR 0

/**
 * Search over τ: doubling probes, then a linear scan of the bracket.
 */
#define TC_SEARCH_EXP_LINEAR 1

/**
 * Search over τ: every τ from 1 to m.
 */
#define TC_SEARCH_FULL 2

typedef enum TcStatus {
  TC_OK = 0,
  TC_NULL_POINTER = 1,
  TC_INVALID_ARGUMENT = 2,
  TC_PARSE = 3,
  TC_IO = 4,
  TC_SOLVER = 5,
  TC_PANIC = 6,
} TcStatus;

typedef struct TcGraph TcGraph;

typedef struct TcInstance TcInstance;

typedef struct TcSolution TcSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *tc_last_error_message(void);

/**
 * Parses the TAB-separated experts and tasks files.
 *
 * # Safety
 * Paths must be null or NUL-terminated strings; `out` must be writable.
 */
enum TcStatus tc_instance_from_files(const char *experts_path,
                                     const char *tasks_path,
                                     struct TcInstance **out);

/**
 * Builds an instance from skill ids in CSR form: expert `i` holds
 * `expert_skills[expert_offsets[i]..expert_offsets[i + 1]]`, likewise for
 * tasks. Offset arrays have `count + 1` entries.
 *
 * # Safety
 * Arrays must hold the stated number of elements; `out` must be writable.
 */
enum TcStatus tc_instance_from_arrays(uint32_t num_skills,
                                      size_t num_experts,
                                      const uint32_t *expert_offsets,
                                      const uint32_t *expert_skills,
                                      size_t num_tasks,
                                      const uint32_t *task_offsets,
                                      const uint32_t *task_skills,
                                      struct TcInstance **out);

/**
 * # Safety
 * `instance` must be null or a pointer returned by this library, freed once.
 */
void tc_instance_free(struct TcInstance *instance);

/**
 * Number of experts, 0 for a null instance.
 *
 * # Safety
 * `instance` must be null or valid.
 */
size_t tc_instance_num_experts(const struct TcInstance *instance);

/**
 * Number of tasks, 0 for a null instance.
 *
 * # Safety
 * `instance` must be null or valid.
 */
size_t tc_instance_num_tasks(const struct TcInstance *instance);

/**
 * Shortest-path closure of an undirected weighted edge list over
 * `num_experts` nodes.
 *
 * # Safety
 * The three edge arrays must hold `num_edges` elements; `out` must be
 * writable.
 */
enum TcStatus tc_graph_from_edges(size_t num_experts,
                                  const uint32_t *sources,
                                  const uint32_t *targets,
                                  const double *weights,
                                  size_t num_edges,
                                  struct TcGraph **out);

/**
 * Closure distance between experts `i` and `j` (infinity if disconnected).
 *
 * # Safety
 * `graph` must be valid and `out` writable.
 */
enum TcStatus tc_graph_distance(const struct TcGraph *graph, size_t i, size_t j, double *out);

/**
 * # Safety
 * `graph` must be null or a pointer returned by this library, freed once.
 */
void tc_graph_free(struct TcGraph *graph);

/**
 * ThresholdGreedy with balancing coefficient `lambda`; `search` is one of
 * the `TC_SEARCH_*` codes.
 *
 * # Safety
 * `instance` must be valid and `out` writable.
 */
enum TcStatus tc_threshold_greedy(const struct TcInstance *instance,
                                  double lambda,
                                  uint32_t search,
                                  struct TcSolution **out);

/**
 * NThreshold with team radius bound `radius`. `all_radii` selects balls at
 * `k` evenly split radii instead of radius `radius` only; `greedy_matcher`
 * selects the greedy team matcher instead of the exact one.
 *
 * # Safety
 * `instance` and `graph` must be valid and `out` writable.
 */
enum TcStatus tc_nthreshold(const struct TcInstance *instance,
                            const struct TcGraph *graph,
                            double lambda,
                            double radius,
                            bool all_radii,
                            uint32_t k,
                            bool greedy_matcher,
                            uint32_t search,
                            struct TcSolution **out);

/**
 * Winning threshold; 0 means the empty assignment won.
 *
 * # Safety
 * `solution` must be null or valid.
 */
uint32_t tc_solution_best_tau(const struct TcSolution *solution);

/**
 * Total coverage of the returned assignment.
 *
 * # Safety
 * `solution` must be null or valid.
 */
double tc_solution_coverage(const struct TcSolution *solution);

/**
 * Largest expert load of the returned assignment.
 *
 * # Safety
 * `solution` must be null or valid.
 */
uint32_t tc_solution_max_load(const struct TcSolution *solution);

/**
 * `λ·C − Lmax` of the returned assignment.
 *
 * # Safety
 * `solution` must be null or valid.
 */
double tc_solution_objective(const struct TcSolution *solution);

/**
 * Number of (expert, task) pairs in the returned assignment.
 *
 * # Safety
 * `solution` must be null or valid.
 */
size_t tc_solution_num_pairs(const struct TcSolution *solution);

/**
 * Copies the pairs, sorted by (expert, task), into two arrays of
 * `capacity` elements. Fails with `TC_INVALID_ARGUMENT` if they are too
 * short.
 *
 * # Safety
 * `solution` must be valid; both arrays must hold `capacity` elements.
 */
enum TcStatus tc_solution_pairs(const struct TcSolution *solution,
                                uint32_t *experts,
                                uint32_t *tasks,
                                size_t capacity);

/**
 * # Safety
 * `solution` must be null or a pointer returned by this library, freed once.
 */
void tc_solution_free(struct TcSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEAMCOVER_H */

/* Copyright 2026 The gprop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GPROP_GPROP_H_
#define GPROP_GPROP_H_

/* C interface to the gprop simulation library. All handles are opaque; every
 * call returns a gprop_status and, on failure, leaves a message retrievable
 * through gprop_last_error() on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GPROP_API __declspec(dllexport)
#else
#define GPROP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gprop_status {
  GPROP_OK = 0,
  GPROP_ERR_PARSE = 1,
  GPROP_ERR_VALIDATION = 2,
  GPROP_ERR_IO = 3,
  GPROP_ERR_INTEGRITY = 4,
  GPROP_ERR_PROTOCOL = 5,
  GPROP_ERR_RESOURCE = 6,
  GPROP_ERR_CONTRACT = 7,
  GPROP_ERR_CONFIG = 8,
  GPROP_ERR_VERIFICATION = 9,
  GPROP_ERR_INTERNAL = 10,
  GPROP_ERR_NULL_ARGUMENT = 11
} gprop_status;

typedef struct gprop_graph gprop_graph;
typedef struct gprop_sim gprop_sim;

/* Message of the last failed call on this thread; never NULL. */
GPROP_API const char* gprop_last_error(void);
/* Short lower-case name of a status ("ok", "parse", ...). */
GPROP_API const char* gprop_status_name(gprop_status status);
/* Process exit code for a status: 0 ok, 1 runtime, 2 config/input, 3 verification. */
GPROP_API int gprop_exit_code(gprop_status status);
GPROP_API const char* gprop_version(void);

/* Strings returned through char** out-parameters are owned by the caller. */
GPROP_API void gprop_string_free(char* s);

/* Graphs. A path ending in ".gprc" loads the binary format. */
GPROP_API gprop_status gprop_graph_load(const char* path, int directed, int weighted, gprop_graph** out);
GPROP_API gprop_status gprop_graph_from_edges(uint64_t num_nodes, const uint64_t* sources, const uint64_t* targets,
                                              const double* weights, size_t num_edges, int directed,
                                              gprop_graph** out);
GPROP_API gprop_status gprop_graph_save_binary(const gprop_graph* graph, const char* path);
GPROP_API void gprop_graph_free(gprop_graph* graph);
GPROP_API gprop_status gprop_graph_num_nodes(const gprop_graph* graph, uint64_t* out);
GPROP_API gprop_status gprop_graph_num_edges(const gprop_graph* graph, uint64_t* out);
/* Writes min(capacity, N) in-degrees. */
GPROP_API gprop_status gprop_graph_in_degree(const gprop_graph* graph, uint64_t* out, size_t capacity);
/* Top-degree seeds: writes up to `capacity` ids and the full count to *count. */
GPROP_API gprop_status gprop_graph_degree_seeds(const gprop_graph* graph, double fraction, uint64_t* out,
                                                size_t capacity, size_t* count);

/* Simulations over one graph, model and seed set. `params_json` is a JSON
 * object such as {"beta":0.01,"lambda":0.005}. The graph may be freed after
 * creation. */
GPROP_API gprop_status gprop_sim_create(const gprop_graph* graph, const char* model, const char* params_json,
                                        const uint64_t* seeds, size_t num_seeds, uint64_t master_seed,
                                        size_t threads, gprop_sim** out);
GPROP_API void gprop_sim_free(gprop_sim* sim);
GPROP_API gprop_status gprop_sim_run_iteration(gprop_sim* sim);
GPROP_API gprop_status gprop_sim_run_iterations(gprop_sim* sim, uint64_t times);
/* Resets to the next epoch's initial state (sim index 0, 1, 2, ...) and runs `times` steps. */
GPROP_API gprop_status gprop_sim_run_epoch(gprop_sim* sim, uint64_t times);
/* Results JSON of `epochs` epochs; steps < 0 means "until converged". */
GPROP_API gprop_status gprop_sim_run_epochs(gprop_sim* sim, uint64_t epochs, int64_t steps, size_t batch_size,
                                            char** results_json);
/* Integer state label of every node of the current single-lane state. */
GPROP_API gprop_status gprop_sim_labels(const gprop_sim* sim, uint8_t* out, size_t capacity);
GPROP_API gprop_status gprop_sim_step(const gprop_sim* sim, uint32_t* out);

/* JSON-configured commands; keys match the command-line flags. */
GPROP_API gprop_status gprop_run_json(const char* config_json, char** results_json);
GPROP_API gprop_status gprop_run_distributed_json(const char* config_json, char** results_json);
GPROP_API gprop_status gprop_partition_json(const char* config_json, char** summary_json);
GPROP_API gprop_status gprop_info_json(const char* config_json, char** info_json);

#ifdef __cplusplus
}
#endif

#endif /* GPROP_GPROP_H_ */

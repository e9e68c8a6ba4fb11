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

#include "gprop/gprop.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "gprop/commands.hpp"
#include "gprop/engine.hpp"

struct gprop_graph {
  std::shared_ptr<const gprop::CsrGraph> graph;
};

struct gprop_sim {
  std::unique_ptr<gprop::Simulation> sim;
};

namespace {

thread_local std::string g_last_error;

gprop_status status_of(gprop::ErrorKind kind) {
  using gprop::ErrorKind;
  switch (kind) {
    case ErrorKind::Parse: return GPROP_ERR_PARSE;
    case ErrorKind::Validation: return GPROP_ERR_VALIDATION;
    case ErrorKind::Io: return GPROP_ERR_IO;
    case ErrorKind::Integrity: return GPROP_ERR_INTEGRITY;
    case ErrorKind::Protocol: return GPROP_ERR_PROTOCOL;
    case ErrorKind::Resource: return GPROP_ERR_RESOURCE;
    case ErrorKind::Contract: return GPROP_ERR_CONTRACT;
    case ErrorKind::Config: return GPROP_ERR_CONFIG;
    case ErrorKind::Verification: return GPROP_ERR_VERIFICATION;
    case ErrorKind::Internal: return GPROP_ERR_INTERNAL;
  }
  return GPROP_ERR_INTERNAL;
}

template <typename F>
gprop_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return GPROP_OK;
  } catch (const gprop::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return GPROP_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GPROP_ERR_RESOURCE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GPROP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return GPROP_ERR_INTERNAL;
  }
}

gprop_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return GPROP_ERR_NULL_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_config(const char* text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    gprop::fail(gprop::ErrorKind::Parse, std::string("configuration is not valid JSON: ") + e.what());
  }
}

}  // namespace

extern "C" {

const char* gprop_last_error(void) { return g_last_error.c_str(); }

const char* gprop_status_name(gprop_status status) {
  switch (status) {
    case GPROP_OK: return "ok";
    case GPROP_ERR_PARSE: return "parse";
    case GPROP_ERR_VALIDATION: return "validation";
    case GPROP_ERR_IO: return "io";
    case GPROP_ERR_INTEGRITY: return "integrity";
    case GPROP_ERR_PROTOCOL: return "protocol";
    case GPROP_ERR_RESOURCE: return "resource";
    case GPROP_ERR_CONTRACT: return "contract";
    case GPROP_ERR_CONFIG: return "config";
    case GPROP_ERR_VERIFICATION: return "verification";
    case GPROP_ERR_INTERNAL: return "internal";
    case GPROP_ERR_NULL_ARGUMENT: return "null_argument";
  }
  return "unknown";
}

int gprop_exit_code(gprop_status status) {
  switch (status) {
    case GPROP_OK: return 0;
    case GPROP_ERR_PARSE:
    case GPROP_ERR_VALIDATION:
    case GPROP_ERR_IO:
    case GPROP_ERR_INTEGRITY:
    case GPROP_ERR_CONFIG:
    case GPROP_ERR_NULL_ARGUMENT:
      return 2;
    case GPROP_ERR_VERIFICATION:
      return 3;
    default:
      return 1;
  }
}

const char* gprop_version(void) { return "0.1.0"; }

void gprop_string_free(char* s) { delete[] s; }

gprop_status gprop_graph_load(const char* path, int directed, int weighted, gprop_graph** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    gprop::EdgeListOptions opt;
    opt.directed = directed != 0;
    opt.weighted = weighted != 0;
    auto g = std::make_unique<gprop_graph>();
    g->graph = std::make_shared<const gprop::CsrGraph>(gprop::load_graph(path, opt));
    *out = g.release();
  });
}

gprop_status gprop_graph_from_edges(uint64_t num_nodes, const uint64_t* sources, const uint64_t* targets,
                                    const double* weights, size_t num_edges, int directed, gprop_graph** out) {
  if (!out) return null_arg("out");
  if (num_edges && (!sources || !targets)) return null_arg("sources/targets");
  return guarded([&] {
    std::vector<gprop::Edge> edges(num_edges);
    for (size_t i = 0; i < num_edges; ++i) {
      if (sources[i] >= num_nodes || targets[i] >= num_nodes) {
        gprop::fail(gprop::ErrorKind::Validation, "edge " + std::to_string(i) + " has an endpoint outside [0, N)");
      }
      edges[i] = {sources[i], targets[i], weights ? weights[i] : 1.0};
    }
    auto g = std::make_unique<gprop_graph>();
    g->graph = std::make_shared<const gprop::CsrGraph>(
        gprop::build_csr(num_nodes, edges, weights != nullptr, directed != 0));
    *out = g.release();
  });
}

gprop_status gprop_graph_save_binary(const gprop_graph* graph, const char* path) {
  if (!graph) return null_arg("graph");
  if (!path) return null_arg("path");
  return guarded([&] { gprop::save_binary(*graph->graph, path); });
}

void gprop_graph_free(gprop_graph* graph) { delete graph; }

gprop_status gprop_graph_num_nodes(const gprop_graph* graph, uint64_t* out) {
  if (!graph || !out) return null_arg("graph/out");
  *out = graph->graph->num_nodes();
  return GPROP_OK;
}

gprop_status gprop_graph_num_edges(const gprop_graph* graph, uint64_t* out) {
  if (!graph || !out) return null_arg("graph/out");
  *out = graph->graph->num_edges();
  return GPROP_OK;
}

gprop_status gprop_graph_in_degree(const gprop_graph* graph, uint64_t* out, size_t capacity) {
  if (!graph || (!out && capacity)) return null_arg("graph/out");
  return guarded([&] {
    const auto deg = gprop::in_degree(*graph->graph);
    std::copy_n(deg.begin(), std::min(capacity, deg.size()), out);
  });
}

gprop_status gprop_graph_degree_seeds(const gprop_graph* graph, double fraction, uint64_t* out, size_t capacity,
                                      size_t* count) {
  if (!graph || !count || (!out && capacity)) return null_arg("graph/out/count");
  return guarded([&] {
    const auto seeds = gprop::degree_centrality_seeds(*graph->graph, fraction);
    std::copy_n(seeds.begin(), std::min(capacity, seeds.size()), out);
    *count = seeds.size();
  });
}

gprop_status gprop_sim_create(const gprop_graph* graph, const char* model, const char* params_json,
                              const uint64_t* seeds, size_t num_seeds, uint64_t master_seed, size_t threads,
                              gprop_sim** out) {
  if (!graph) return null_arg("graph");
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  if (num_seeds && !seeds) return null_arg("seeds");
  return guarded([&] {
    std::map<std::string, double> params;
    if (params_json && *params_json) {
      const auto j = parse_config(params_json);
      if (!j.is_object()) gprop::fail(gprop::ErrorKind::Config, "parameters must be a JSON object");
      for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) gprop::fail(gprop::ErrorKind::Config, "parameter '" + k + "' must be a number");
        params[k] = v.get<double>();
      }
    }
    auto spec = gprop::ModelSpec::parse(model, std::move(params));
    auto seed_set = gprop::make_seed_set(std::vector<gprop::NodeId>(seeds, seeds + num_seeds),
                                         graph->graph->num_nodes());
    gprop::EngineOptions opt;
    opt.threads = threads;
    auto s = std::make_unique<gprop_sim>();
    s->sim = std::make_unique<gprop::Simulation>(graph->graph, std::move(spec), std::move(seed_set),
                                                 master_seed, opt);
    *out = s.release();
  });
}

void gprop_sim_free(gprop_sim* sim) { delete sim; }

gprop_status gprop_sim_run_iteration(gprop_sim* sim) {
  if (!sim) return null_arg("sim");
  return guarded([&] { sim->sim->run_iteration(); });
}

gprop_status gprop_sim_run_iterations(gprop_sim* sim, uint64_t times) {
  if (!sim) return null_arg("sim");
  return guarded([&] { sim->sim->run_iterations(times); });
}

gprop_status gprop_sim_run_epoch(gprop_sim* sim, uint64_t times) {
  if (!sim) return null_arg("sim");
  return guarded([&] { sim->sim->run_epoch(times); });
}

gprop_status gprop_sim_run_epochs(gprop_sim* sim, uint64_t epochs, int64_t steps, size_t batch_size,
                                  char** results_json) {
  if (!sim) return null_arg("sim");
  if (!results_json) return null_arg("results_json");
  return guarded([&] {
    if (steps > 0xffffffffll) gprop::fail(gprop::ErrorKind::Validation, "step count too large");
    const auto st = steps < 0 ? gprop::Steps::converge() : gprop::Steps::fixed(static_cast<std::uint32_t>(steps));
    const auto r = sim->sim->run_epochs(epochs, st, batch_size);
    nlohmann::ordered_json config;
    config["model"] = r.model.name();
    config["epochs"] = epochs;
    config["batch_size"] = batch_size;
    config["master_seed"] = r.master_seed;
    *results_json = dup_string(gprop::results_to_json(r, config).dump());
  });
}

gprop_status gprop_sim_labels(const gprop_sim* sim, uint8_t* out, size_t capacity) {
  if (!sim || (!out && capacity)) return null_arg("sim/out");
  return guarded([&] {
    const auto& state = sim->sim->state();
    const auto& model = sim->sim->engine().model();
    const size_t n = std::min<size_t>(capacity, state.nodes());
    for (size_t v = 0; v < n; ++v) out[v] = gprop::state_label(model, state, 0, v);
  });
}

gprop_status gprop_sim_step(const gprop_sim* sim, uint32_t* out) {
  if (!sim || !out) return null_arg("sim/out");
  *out = sim->sim->state().step();
  return GPROP_OK;
}

gprop_status gprop_run_json(const char* config_json, char** results_json) {
  if (!config_json) return null_arg("config_json");
  if (!results_json) return null_arg("results_json");
  return guarded([&] {
    const auto c = gprop::parse_run_config(parse_config(config_json));
    *results_json = dup_string(gprop::cmd_run(c).dump());
  });
}

gprop_status gprop_run_distributed_json(const char* config_json, char** results_json) {
  if (!config_json) return null_arg("config_json");
  if (!results_json) return null_arg("results_json");
  return guarded([&] {
    const auto c = gprop::parse_run_config(parse_config(config_json), true);
    *results_json = dup_string(gprop::cmd_run_distributed(c).dump());
  });
}

gprop_status gprop_partition_json(const char* config_json, char** summary_json) {
  if (!config_json) return null_arg("config_json");
  if (!summary_json) return null_arg("summary_json");
  return guarded([&] {
    const auto j = parse_config(config_json);
    const auto src = gprop::parse_graph_source(j, {"parts", "root"});
    if (!j.contains("parts") || !j.at("parts").is_number_unsigned()) {
      gprop::fail(gprop::ErrorKind::Config, "'parts' must be a positive integer");
    }
    const auto parts = j.at("parts").get<std::uint64_t>();
    if (parts == 0 || parts > 65535) gprop::fail(gprop::ErrorKind::Config, "'parts' must be in [1, 65535]");
    if (!j.contains("root") || !j.at("root").is_string()) gprop::fail(gprop::ErrorKind::Config, "'root' must be a path");
    *summary_json = dup_string(
        gprop::cmd_partition(src, static_cast<std::uint32_t>(parts), j.at("root").get<std::string>()).dump());
  });
}

gprop_status gprop_info_json(const char* config_json, char** info_json) {
  if (!config_json) return null_arg("config_json");
  if (!info_json) return null_arg("info_json");
  return guarded([&] {
    const auto src = gprop::parse_graph_source(parse_config(config_json));
    *info_json = dup_string(gprop::cmd_info(src).dump());
  });
}

}  // extern "C"

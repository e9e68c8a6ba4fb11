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

#pragma once

// JSON-configured commands shared by the C API and the command-line tool.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "gprop/distributed.hpp"
#include "gprop/error.hpp"
#include "gprop/graph.hpp"
#include "gprop/results.hpp"

namespace gprop {

struct GraphSource {
  std::string path;
  EdgeListOptions options;
};

/// Resolved run configuration. Built from a JSON object whose keys match the
/// command-line flags; unknown keys are rejected.
struct RunConfig {
  GraphSource graph;
  std::string model;
  std::map<std::string, double> params;
  std::string seeds;  // "top-degree:<fraction>" or an id-list file
  std::vector<NodeId> seed_ids;  // explicit ids given as a JSON array
  bool explicit_seed_ids = false;
  std::uint64_t epochs = 1;
  Steps steps = Steps::fixed(0);
  std::uint64_t batch_size = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t threads = 1;
  std::uint64_t memory_cap_bytes = 0;
  std::uint64_t converge_step_cap = 0;
  std::string output;
  // run-distributed only
  std::string root;
  std::uint32_t workers = 0;
  TransportKind transport = TransportKind::InProcess;
  bool verify_against_single = false;
};

/// `distributed` additionally accepts root/workers/transport/verify keys and
/// requires root and workers.
RunConfig parse_run_config(const nlohmann::json& j, bool distributed = false);

/// Parses "beta=0.01,lambda=0.005".
std::map<std::string, double> parse_params(const std::string& text);

/// Keys that fully determine a result. Thread count, memory cap, output path
/// and distributed layout are excluded, so single-process and distributed
/// runs embed the same config.
nlohmann::ordered_json resolved_config(const RunConfig& c);

nlohmann::ordered_json cmd_run(const RunConfig& c);
nlohmann::ordered_json cmd_run_distributed(const RunConfig& c);
nlohmann::ordered_json cmd_partition(const GraphSource& graph, std::uint32_t n_parts, const std::string& root);
nlohmann::ordered_json cmd_info(const GraphSource& graph);

/// Parses {"graph": ..., "directed": ..., "weighted": ..., "remap_ids": ...}
/// plus any keys listed in `extra`.
GraphSource parse_graph_source(const nlohmann::json& j, std::initializer_list<const char*> extra = {});

/// 0 ok, 1 runtime, 2 config/input, 3 verification.
int exit_code(ErrorKind kind) noexcept;

nlohmann::ordered_json error_json(ErrorKind kind, const std::string& message);

}  // namespace gprop

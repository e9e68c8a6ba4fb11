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

#include "gprop/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gprop/engine.hpp"
#include "gprop/partition.hpp"

namespace gprop {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(ErrorKind::Config, "configuration must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) fail(ErrorKind::Config, "unknown configuration key '" + k + "'");
  }
}

std::uint64_t get_u64(const json& j, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    fail(ErrorKind::Config, std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) fail(ErrorKind::Config, std::string("'") + key + "' must be true or false");
  return j.at(key).get<bool>();
}

std::string get_string(const json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) fail(ErrorKind::Config, std::string("missing required key '") + key + "'");
    return {};
  }
  if (!j.at(key).is_string()) fail(ErrorKind::Config, std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

struct LoadedGraph {
  std::shared_ptr<const CsrGraph> graph;
  std::vector<std::uint64_t> external_ids;  // empty unless remapped
};

LoadedGraph load(const GraphSource& src) {
  LoadedGraph out;
  const std::filesystem::path path(src.path);
  if (path.extension() == ".gprc") {
    out.graph = std::make_shared<const CsrGraph>(load_binary(path));
  } else {
    out.graph = std::make_shared<const CsrGraph>(
        load_edge_list(path, src.options, src.options.remap_ids ? &out.external_ids : nullptr));
  }
  return out;
}

SeedSet resolve_seeds(const RunConfig& c, const LoadedGraph& g) {
  const auto n = g.graph->num_nodes();
  if (c.explicit_seed_ids) return make_seed_set(c.seed_ids, n);
  if (c.seeds.empty()) return {};
  static const std::string prefix = "top-degree:";
  if (c.seeds.rfind(prefix, 0) == 0) {
    const auto text = c.seeds.substr(prefix.size());
    double fraction = 0.0;
    try {
      std::size_t used = 0;
      fraction = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      fail(ErrorKind::Config, "bad seed fraction '" + text + "'");
    }
    return degree_centrality_seeds(*g.graph, fraction);
  }
  std::ifstream in(c.seeds);
  if (!in) fail(ErrorKind::Io, "cannot open seed file " + c.seeds);
  std::unordered_map<std::uint64_t, NodeId> dense;
  for (std::size_t i = 0; i < g.external_ids.size(); ++i) dense.emplace(g.external_ids[i], i);
  std::vector<NodeId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      std::uint64_t id = 0;
      try {
        std::size_t used = 0;
        if (tok[0] == '-') throw std::invalid_argument(tok);
        id = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail(ErrorKind::Parse, c.seeds + ":" + std::to_string(line_no) + ": bad node id '" + tok + "'");
      }
      if (!g.external_ids.empty()) {
        auto it = dense.find(id);
        if (it == dense.end()) fail(ErrorKind::Validation, "seed id " + tok + " does not occur in the graph");
        id = it->second;
      }
      ids.push_back(id);
    }
  }
  return make_seed_set(std::move(ids), n);
}

ordered_json run_single(const RunConfig& c, const ModelSpec& model, const LoadedGraph& g, const SeedSet& seeds) {
  EngineOptions opt;
  opt.threads = c.threads;
  opt.memory_cap_bytes = c.memory_cap_bytes;
  opt.converge_step_cap = c.converge_step_cap;
  Engine engine(g.graph, model, c.master_seed, opt);
  const auto r = engine.run_epochs(seeds, c.epochs, c.steps, static_cast<std::size_t>(c.batch_size));
  return results_to_json(r, resolved_config(c));
}

}  // namespace

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::Config, "parameter '" + item + "' is not name=value");
    const auto name = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      fail(ErrorKind::Config, "parameter '" + name + "' has a non-numeric value '" + value + "'");
    }
    if (!out.emplace(name, v).second) fail(ErrorKind::Config, "parameter '" + name + "' given twice");
  }
  return out;
}

GraphSource parse_graph_source(const json& j, std::initializer_list<const char*> extra) {
  std::set<std::string> allowed{"graph", "directed", "weighted", "remap_ids"};
  for (const char* k : extra) allowed.insert(k);
  reject_unknown(j, allowed);
  GraphSource g;
  g.path = get_string(j, "graph", true);
  g.options.directed = get_bool(j, "directed", true);
  g.options.weighted = get_bool(j, "weighted", false);
  g.options.remap_ids = get_bool(j, "remap_ids", false);
  return g;
}

RunConfig parse_run_config(const json& j, bool distributed) {
  std::set<std::string> allowed{"graph", "directed", "weighted", "remap_ids", "model", "params",
                                "seeds", "epochs", "steps", "batch_size", "master_seed", "threads",
                                "memory_cap_bytes", "converge_step_cap", "output"};
  if (distributed) {
    for (const char* k : {"root", "workers", "transport", "verify_against_single"}) allowed.insert(k);
  }
  reject_unknown(j, allowed);
  RunConfig c;
  json graph_part = json::object();
  for (const char* k : {"graph", "directed", "weighted", "remap_ids"}) {
    if (j.contains(k)) graph_part[k] = j.at(k);
  }
  c.graph = parse_graph_source(graph_part);
  c.model = get_string(j, "model", true);
  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (p.is_string()) {
      c.params = parse_params(p.get<std::string>());
    } else if (p.is_object()) {
      for (const auto& [k, v] : p.items()) {
        if (!v.is_number()) fail(ErrorKind::Config, "parameter '" + k + "' must be a number");
        c.params[k] = v.get<double>();
      }
    } else {
      fail(ErrorKind::Config, "'params' must be an object or a name=value list");
    }
  }
  // Validates the model name and parameters before anything is loaded.
  const auto model = ModelSpec::parse(c.model, c.params);
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_array()) {
      c.explicit_seed_ids = true;
      for (const auto& id : s) {
        if (!id.is_number_unsigned()) fail(ErrorKind::Config, "'seeds' entries must be non-negative integers");
        c.seed_ids.push_back(id.get<NodeId>());
      }
    } else if (s.is_string()) {
      c.seeds = s.get<std::string>();
    } else {
      fail(ErrorKind::Config, "'seeds' must be a string or an array of node ids");
    }
  }
  c.epochs = get_u64(j, "epochs", 1);
  if (c.epochs == 0) fail(ErrorKind::Config, "'epochs' must be >= 1");
  if (j.contains("steps") && j.at("steps").is_string()) {
    if (j.at("steps").get<std::string>() != "converge") fail(ErrorKind::Config, "'steps' must be an integer or \"converge\"");
    if (!model.has_fixed_point()) {
      fail(ErrorKind::Config, "steps \"converge\" is only valid for models with a fixed point (ic, threshold)");
    }
    c.steps = Steps::converge();
  } else {
    const auto s = get_u64(j, "steps", 0);
    if (s > 0xffffffffull - 1) fail(ErrorKind::Config, "'steps' is too large");
    c.steps = Steps::fixed(static_cast<std::uint32_t>(s));
  }
  c.batch_size = get_u64(j, "batch_size", 1);
  if (c.batch_size == 0) fail(ErrorKind::Config, "'batch_size' must be >= 1");
  c.master_seed = get_u64(j, "master_seed", 0);
  c.threads = get_u64(j, "threads", 1);
  c.memory_cap_bytes = get_u64(j, "memory_cap_bytes", 0);
  c.converge_step_cap = get_u64(j, "converge_step_cap", 0);
  c.output = get_string(j, "output", false);
  if (distributed) {
    c.root = get_string(j, "root", true);
    if (!j.contains("workers")) fail(ErrorKind::Config, "missing required key 'workers'");
    const auto w = get_u64(j, "workers", 0);
    if (w == 0 || w > 65535) fail(ErrorKind::Config, "'workers' must be in [1, 65535]");
    c.workers = static_cast<std::uint32_t>(w);
    const auto t = get_string(j, "transport", false);
    if (t.empty() || t == "inprocess") {
      c.transport = TransportKind::InProcess;
    } else if (t == "socket") {
      c.transport = TransportKind::Socket;
    } else {
      fail(ErrorKind::Config, "'transport' must be \"inprocess\" or \"socket\"");
    }
    c.verify_against_single = get_bool(j, "verify_against_single", false);
  }
  return c;
}

ordered_json resolved_config(const RunConfig& c) {
  ordered_json j;
  j["graph"] = c.graph.path;
  j["directed"] = c.graph.options.directed;
  j["weighted"] = c.graph.options.weighted;
  j["remap_ids"] = c.graph.options.remap_ids;
  j["model"] = c.model;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  j["params"] = params;
  if (c.explicit_seed_ids) {
    j["seeds"] = c.seed_ids;
  } else {
    j["seeds"] = c.seeds;
  }
  j["epochs"] = c.epochs;
  if (c.steps.until_converged) {
    j["steps"] = "converge";
  } else {
    j["steps"] = c.steps.count;
  }
  j["batch_size"] = c.batch_size;
  j["master_seed"] = c.master_seed;
  if (c.converge_step_cap) j["converge_step_cap"] = c.converge_step_cap;
  return j;
}

ordered_json cmd_run(const RunConfig& c) {
  const auto model = ModelSpec::parse(c.model, c.params);
  const auto g = load(c.graph);
  model.check_graph(*g.graph);
  const auto seeds = resolve_seeds(c, g);
  return run_single(c, model, g, seeds);
}

ordered_json cmd_run_distributed(const RunConfig& c) {
  const auto model = ModelSpec::parse(c.model, c.params);
  const auto g = load(c.graph);
  model.check_graph(*g.graph);
  const auto manifest = load_manifest(c.root);
  check_manifest_matches(manifest, *g.graph);
  const auto seeds = resolve_seeds(c, g);
  DistributedOptions opt;
  opt.transport = c.transport;
  opt.memory_cap_bytes = c.memory_cap_bytes;
  opt.converge_step_cap = c.converge_step_cap;
  const auto r = run_distributed_epochs(c.root, c.workers, model, seeds, c.epochs, c.steps,
                                        static_cast<std::size_t>(c.batch_size), c.master_seed, opt);
  auto out = results_to_json(r, resolved_config(c));
  if (c.verify_against_single) {
    const auto single = run_single(c, model, g, seeds);
    if (single.dump() != out.dump()) {
      fail(ErrorKind::Verification, "distributed results differ from the single-process run");
    }
  }
  return out;
}

ordered_json cmd_partition(const GraphSource& source, std::uint32_t n_parts, const std::string& root) {
  if (n_parts == 0) fail(ErrorKind::Config, "number of partitions must be >= 1");
  if (root.empty()) fail(ErrorKind::Config, "partition root directory is required");
  const auto g = load(source);
  const auto parts = generate_partition(*g.graph, n_parts);
  const auto hash = graph_hash(*g.graph);
  save_partitions(parts, hash, root);
  const auto deg = in_degree(*g.graph);
  const std::uint64_t max_in = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  const double m = static_cast<double>(g.graph->num_edges());
  const double ideal = m / n_parts;
  ordered_json shards = ordered_json::array();
  double max_dev = 0.0;
  for (const auto& p : parts) {
    const double dev = std::fabs(static_cast<double>(p.edge_load()) - ideal);
    max_dev = std::max(max_dev, dev);
    ordered_json s;
    s["index"] = p.index;
    s["owned_targets"] = p.owned_targets.size();
    s["edge_load"] = p.edge_load();
    s["deviation"] = dev;
    shards.push_back(std::move(s));
  }
  const bool holds = g.graph->num_edges() == 0 || max_dev < static_cast<double>(max_in);
  if (!holds) fail(ErrorKind::Internal, "partition violates the balance bound");
  ordered_json j;
  j["format_version"] = kManifestFormatVersion;
  j["root"] = root;
  j["num_parts"] = n_parts;
  j["num_nodes"] = g.graph->num_nodes();
  j["num_edges"] = g.graph->num_edges();
  j["graph_hash"] = hex64(hash);
  j["ideal_load"] = ideal;
  j["max_in_degree"] = max_in;
  j["max_deviation"] = max_dev;
  j["balance_bound_holds"] = holds;
  j["shards"] = std::move(shards);
  return j;
}

ordered_json cmd_info(const GraphSource& source) {
  const auto g = load(source);
  const auto& graph = *g.graph;
  const auto deg = in_degree(graph);
  const std::uint64_t max_in = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  const double n = static_cast<double>(graph.num_nodes());
  const double m = static_cast<double>(graph.num_edges());
  ordered_json j;
  j["format_version"] = 1;
  j["graph"] = source.path;
  j["num_nodes"] = graph.num_nodes();
  j["num_edges"] = graph.num_edges();
  j["average_degree"] = n > 0 ? 2.0 * m / n : 0.0;
  j["mean_in_degree"] = n > 0 ? m / n : 0.0;
  j["max_in_degree"] = max_in;
  j["weighted"] = graph.weighted();
  j["directed"] = graph.directed();
  j["graph_hash"] = hex64(graph_hash(graph));
  return j;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Validation:
    case ErrorKind::Io:
    case ErrorKind::Integrity:
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Verification:
      return 3;
    default:
      return 1;
  }
}

ordered_json error_json(ErrorKind kind, const std::string& message) {
  ordered_json e;
  e["kind"] = error_kind_name(kind);
  e["message"] = message;
  e["exit_code"] = exit_code(kind);
  ordered_json j;
  j["error"] = std::move(e);
  return j;
}

}  // namespace gprop

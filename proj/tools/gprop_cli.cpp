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

// Command-line front end. Everything goes through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gprop/gprop.h"

namespace {

using nlohmann::json;

struct GraphFlags {
  std::optional<std::string> graph;
  bool directed = false;
  bool undirected = false;
  bool weighted = false;
  bool remap = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--graph", graph, "Edge list, or a .gprc binary graph");
    auto* d = cmd->add_flag("--directed", directed, "Keep edges as given (default)");
    cmd->add_flag("--undirected", undirected, "Add the reverse of every edge")->excludes(d);
    cmd->add_flag("--weighted", weighted, "Read a weight column");
    cmd->add_flag("--remap-ids", remap, "Map sparse external ids to 0..N-1");
  }

  void apply(json& j) const {
    if (graph) j["graph"] = *graph;
    if (directed) j["directed"] = true;
    if (undirected) j["directed"] = false;
    if (weighted) j["weighted"] = true;
    if (remap) j["remap_ids"] = true;
  }
};

struct RunFlags {
  std::optional<std::string> config;
  GraphFlags graph;
  std::optional<std::string> model, params, seeds, steps, output;
  std::optional<std::uint64_t> epochs, batch, seed, threads, memory_cap, converge_cap;

  void add(CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON config file with the same keys as the flags");
    graph.add(cmd);
    cmd->add_option("--model", model, "si, sis, sir, seir_dt, ic, threshold, voter, majority_rule, hk");
    cmd->add_option("--params", params, "Model parameters, e.g. beta=0.01,lambda=0.005");
    cmd->add_option("--seeds", seeds, "top-degree:<fraction> or a file of node ids");
    cmd->add_option("--epochs", epochs, "Monte Carlo epochs");
    cmd->add_option("--steps", steps, "Steps per epoch, or 'converge' (ic, threshold)");
    cmd->add_option("--batch", batch, "Epochs simulated together in one batch");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    cmd->add_option("--memory-cap", memory_cap, "Memory cap in bytes for one batch");
    cmd->add_option("--converge-cap", converge_cap, "Step cap for --steps converge");
    cmd->add_option("--output", output, "Write results here instead of stdout");
  }

  json build() const {
    json j = json::object();
    if (config) {
      std::ifstream in(*config);
      if (!in) throw std::runtime_error("io:cannot open config file " + *config);
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("parse:config file is not valid JSON: ") + e.what());
      }
      if (!j.is_object()) throw std::runtime_error("config:config file must hold a JSON object");
    }
    graph.apply(j);
    if (model) j["model"] = *model;
    if (params) j["params"] = *params;
    if (seeds) j["seeds"] = *seeds;
    if (epochs) j["epochs"] = *epochs;
    if (steps) {
      if (*steps == "converge") {
        j["steps"] = "converge";
      } else {
        try {
          std::size_t used = 0;
          if (steps->empty() || (*steps)[0] == '-') throw std::invalid_argument(*steps);
          const auto v = std::stoull(*steps, &used);
          if (used != steps->size()) throw std::invalid_argument(*steps);
          j["steps"] = v;
        } catch (const std::exception&) {
          throw std::runtime_error("config:--steps must be a non-negative integer or 'converge'");
        }
      }
    }
    if (batch) j["batch_size"] = *batch;
    if (seed) j["master_seed"] = *seed;
    if (threads) j["threads"] = *threads;
    if (memory_cap) j["memory_cap_bytes"] = *memory_cap;
    if (converge_cap) j["converge_step_cap"] = *converge_cap;
    if (output) j["output"] = *output;
    return j;
  }
};

void print_error(const char* kind, const std::string& message, int code) {
  json e;
  e["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << e.dump() << "\n";
}

int finish(gprop_status st, char* out, const std::string& output_path) {
  if (st != GPROP_OK) {
    const int code = gprop_exit_code(st);
    print_error(gprop_status_name(st), gprop_last_error(), code);
    return code;
  }
  std::string text(out);
  gprop_string_free(out);
  text += "\n";
  if (output_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(output_path, std::ios::binary);
  if (!f || !(f << text)) {
    print_error("io", "cannot write output file " + output_path, 2);
    return 2;
  }
  return 0;
}

std::string output_of(const json& j) {
  return j.contains("output") && j["output"].is_string() ? j["output"].get<std::string>() : std::string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gprop: Monte Carlo propagation simulations on graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gprop_version()));

  auto* run = app.add_subcommand("run", "Run Monte Carlo epochs of a propagation model");
  RunFlags run_flags;
  run_flags.add(run);

  auto* dist = app.add_subcommand("run-distributed", "Run over saved partitions with one worker per shard");
  RunFlags dist_flags;
  dist_flags.add(dist);
  std::optional<std::string> root;
  std::optional<std::uint64_t> workers;
  std::optional<std::string> transport;
  bool verify = false;
  dist->add_option("--root", root, "Partition directory");
  dist->add_option("--workers", workers, "Worker count; must equal the number of partitions");
  dist->add_option("--transport", transport, "inprocess or socket");
  dist->add_flag("--verify-against-single", verify, "Rerun single-process and require identical output");

  auto* part = app.add_subcommand("partition", "Split a graph into target-node shards");
  GraphFlags part_graph;
  part_graph.add(part);
  std::uint64_t parts = 0;
  std::string part_root;
  std::string part_output;
  part->add_option("-d,--parts", parts, "Number of shards")->required();
  part->add_option("--root", part_root, "Output directory")->required();
  part->add_option("--output", part_output, "Write the summary here instead of stdout");

  auto* info = app.add_subcommand("info", "Print graph statistics");
  GraphFlags info_graph;
  info_graph.add(info);
  std::string info_output;
  info->add_option("--output", info_output, "Write the summary here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("config", e.what(), 2);
    return 2;
  }

  try {
    char* out = nullptr;
    if (*run) {
      const auto j = run_flags.build();
      const auto st = gprop_run_json(j.dump().c_str(), &out);
      return finish(st, out, output_of(j));
    }
    if (*dist) {
      auto j = dist_flags.build();
      if (root) j["root"] = *root;
      if (workers) j["workers"] = *workers;
      if (transport) j["transport"] = *transport;
      if (verify) j["verify_against_single"] = true;
      const auto st = gprop_run_distributed_json(j.dump().c_str(), &out);
      return finish(st, out, output_of(j));
    }
    if (*part) {
      json j = json::object();
      part_graph.apply(j);
      j["parts"] = parts;
      j["root"] = part_root;
      const auto st = gprop_partition_json(j.dump().c_str(), &out);
      return finish(st, out, part_output);
    }
    json j = json::object();
    info_graph.apply(j);
    const auto st = gprop_info_json(j.dump().c_str(), &out);
    return finish(st, out, info_output);
  } catch (const std::runtime_error& e) {
    // Flag-assembly errors are tagged "<kind>:<message>".
    const std::string what = e.what();
    const auto colon = what.find(':');
    const std::string kind = what.substr(0, colon);
    print_error(kind.c_str(), what.substr(colon + 1), 2);
    return 2;
  }
}

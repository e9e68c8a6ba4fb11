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

#include "gprop/partition.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "gprc_format.hpp"
#include "gprop/error.hpp"

namespace gprop {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s, const std::string& what) {
  if (s.size() != 18 || s.compare(0, 2, "0x") != 0) fail(ErrorKind::Integrity, what + ": malformed hash");
  std::uint64_t v = 0;
  for (std::size_t i = 2; i < s.size(); ++i) {
    const char c = s[i];
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else fail(ErrorKind::Integrity, what + ": malformed hash");
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  return v;
}

std::filesystem::path shard_path(const std::filesystem::path& root, std::uint32_t q) {
  return root / ("part_" + std::to_string(q) + ".gprc");
}

}  // namespace

std::vector<std::uint32_t> assign_targets(std::span<const std::uint64_t> in_degrees, std::uint32_t n_parts) {
  const std::uint64_t n = in_degrees.size();
  if (n_parts < 1 || n_parts > n) {
    fail(ErrorKind::Validation, "n_parts must be in [1, N] (N = " + std::to_string(n) + ")");
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return in_degrees[a] > in_degrees[b]; });
  const std::uint64_t total = std::accumulate(in_degrees.begin(), in_degrees.end(), std::uint64_t{0});
  if (total == 0) fail(ErrorKind::Validation, "cannot partition an edgeless graph");

  std::vector<std::uint32_t> shard(n);
  std::uint64_t prefix = 0;
  for (NodeId v : order) {
    prefix += in_degrees[v];
    // ceil(d * C_i / W) in exact integer arithmetic.
    const unsigned __int128 num = static_cast<unsigned __int128>(n_parts) * prefix;
    auto q = static_cast<std::uint32_t>((num + total - 1) / total);
    shard[v] = std::clamp<std::uint32_t>(q, 1, n_parts);
  }
  return shard;
}

std::vector<Partition> generate_partition(const CsrGraph& graph, std::uint32_t n_parts) {
  const auto deg = in_degree(graph);
  const auto shard = assign_targets(deg, n_parts);

  std::vector<Partition> parts(n_parts);
  for (std::uint32_t q = 0; q < n_parts; ++q) {
    auto& p = parts[q];
    p.index = q + 1;
    p.num_parts = n_parts;
    p.global_num_nodes = graph.num_nodes();
    p.weighted = graph.weighted();
    p.directed = graph.directed();
    p.row_ptr.push_back(0);
  }
  const auto rp = graph.row_ptr();
  const auto src = graph.src_idx();
  const auto w = graph.weights();
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    auto& p = parts[shard[v] - 1];
    p.owned_targets.push_back(v);
    p.src_idx.insert(p.src_idx.end(), src.begin() + static_cast<std::ptrdiff_t>(rp[v]),
                     src.begin() + static_cast<std::ptrdiff_t>(rp[v + 1]));
    if (!w.empty()) {
      p.weights.insert(p.weights.end(), w.begin() + static_cast<std::ptrdiff_t>(rp[v]),
                       w.begin() + static_cast<std::ptrdiff_t>(rp[v + 1]));
    }
    p.row_ptr.push_back(p.src_idx.size());
  }
  check_disjoint_cover(parts, graph.num_nodes());
  return parts;
}

void check_disjoint_cover(std::span<const Partition> parts, std::uint64_t num_nodes) {
  std::vector<std::uint32_t> owner(num_nodes, 0);
  for (const auto& p : parts) {
    for (NodeId v : p.owned_targets) {
      if (v >= num_nodes) fail(ErrorKind::Integrity, "shard " + std::to_string(p.index) + " owns out-of-range node");
      if (owner[v] != 0) {
        fail(ErrorKind::Integrity, "node " + std::to_string(v) + " owned by shards " + std::to_string(owner[v]) +
                                       " and " + std::to_string(p.index));
      }
      owner[v] = p.index;
    }
  }
  for (NodeId v = 0; v < num_nodes; ++v) {
    if (owner[v] == 0) fail(ErrorKind::Integrity, "node " + std::to_string(v) + " is owned by no shard");
  }
}

PartitionManifest save_partitions(std::span<const Partition> parts, std::uint64_t graph_hash,
                                  const std::filesystem::path& root) {
  if (parts.empty()) fail(ErrorKind::Validation, "no partitions to save");
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + root.string() + ": " + ec.message());

  PartitionManifest m;
  m.num_parts = static_cast<std::uint32_t>(parts.size());
  m.global_num_nodes = parts.front().global_num_nodes;
  m.format_version = kManifestFormatVersion;
  m.graph_hash = graph_hash;
  m.weighted = parts.front().weighted;
  m.directed = parts.front().directed;

  nlohmann::ordered_json shards = nlohmann::ordered_json::array();
  for (const auto& p : parts) {
    detail::GprcContents c;
    c.flags = static_cast<std::uint16_t>(detail::kFlagPartition | (p.weighted ? detail::kFlagWeighted : 0) |
                                         (p.directed ? detail::kFlagDirected : 0));
    c.rows = p.owned_targets.size();
    c.row_ptr = p.row_ptr;
    c.src_idx = p.src_idx;
    c.weights = p.weights;
    c.owned = p.owned_targets;
    const auto bytes = detail::encode_gprc(c);
    const auto path = shard_path(root, p.index);
    detail::write_file(path, bytes);
    const auto h = detail::fnv1a64(bytes.data(), bytes.size());
    m.shard_hashes.push_back(h);
    m.num_edges += p.edge_load();
    nlohmann::ordered_json s;
    s["index"] = p.index;
    s["file"] = path.filename().string();
    s["targets"] = p.owned_targets.size();
    s["edges"] = p.edge_load();
    s["hash"] = hex64(h);
    shards.push_back(std::move(s));
  }

  nlohmann::ordered_json j;
  j["format_version"] = m.format_version;
  j["num_parts"] = m.num_parts;
  j["global_num_nodes"] = m.global_num_nodes;
  j["num_edges"] = m.num_edges;
  j["graph_hash"] = hex64(m.graph_hash);
  j["weighted"] = m.weighted;
  j["directed"] = m.directed;
  j["shards"] = std::move(shards);
  const auto text = j.dump(2) + "\n";
  detail::write_file(root / "manifest.json", std::vector<unsigned char>(text.begin(), text.end()));
  return m;
}

PartitionManifest load_manifest(const std::filesystem::path& root) {
  const auto path = root / "manifest.json";
  const auto bytes = detail::read_file(path);
  const std::string what = path.string();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
    PartitionManifest m;
    m.format_version = j.at("format_version").get<std::uint32_t>();
    if (m.format_version != kManifestFormatVersion) {
      fail(ErrorKind::Integrity, what + ": unsupported manifest version " + std::to_string(m.format_version));
    }
    m.num_parts = j.at("num_parts").get<std::uint32_t>();
    m.global_num_nodes = j.at("global_num_nodes").get<std::uint64_t>();
    m.num_edges = j.at("num_edges").get<std::uint64_t>();
    m.graph_hash = parse_hex64(j.at("graph_hash").get<std::string>(), what);
    m.weighted = j.at("weighted").get<bool>();
    m.directed = j.at("directed").get<bool>();
    const auto& shards = j.at("shards");
    if (shards.size() != m.num_parts || m.num_parts == 0) {
      fail(ErrorKind::Integrity, what + ": shard list does not match num_parts");
    }
    for (const auto& s : shards) m.shard_hashes.push_back(parse_hex64(s.at("hash").get<std::string>(), what));
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Integrity, what + ": " + e.what());
  }
}

Partition load_partition(const std::filesystem::path& root, std::uint32_t partition_idx) {
  const auto m = load_manifest(root);
  if (partition_idx < 1 || partition_idx > m.num_parts) {
    fail(ErrorKind::Validation, "partition index " + std::to_string(partition_idx) + " outside valid range [1, " +
                                    std::to_string(m.num_parts) + "]");
  }
  const auto path = shard_path(root, partition_idx);
  const auto bytes = detail::read_file(path);
  if (detail::fnv1a64(bytes.data(), bytes.size()) != m.shard_hashes[partition_idx - 1]) {
    fail(ErrorKind::Integrity, path.string() + ": content hash does not match manifest");
  }
  auto c = detail::decode_gprc(bytes, path.string());
  if (!(c.flags & detail::kFlagPartition)) fail(ErrorKind::Integrity, path.string() + ": not a partition shard");
  Partition p;
  p.index = partition_idx;
  p.num_parts = m.num_parts;
  p.global_num_nodes = m.global_num_nodes;
  p.weighted = (c.flags & detail::kFlagWeighted) != 0;
  p.directed = (c.flags & detail::kFlagDirected) != 0;
  p.owned_targets = std::move(c.owned);
  p.row_ptr = std::move(c.row_ptr);
  p.src_idx = std::move(c.src_idx);
  p.weights = std::move(c.weights);
  for (std::size_t i = 0; i < p.owned_targets.size(); ++i) {
    if (p.owned_targets[i] >= m.global_num_nodes || (i > 0 && p.owned_targets[i] <= p.owned_targets[i - 1])) {
      fail(ErrorKind::Integrity, path.string() + ": owned targets unsorted or out of range");
    }
  }
  for (NodeId s : p.src_idx) {
    if (s >= m.global_num_nodes) fail(ErrorKind::Integrity, path.string() + ": source id out of range");
  }
  return p;
}

void check_manifest_matches(const PartitionManifest& manifest, const CsrGraph& graph) {
  if (manifest.graph_hash != graph_hash(graph) || manifest.global_num_nodes != graph.num_nodes() ||
      manifest.num_edges != graph.num_edges()) {
    fail(ErrorKind::Integrity, "partitions were generated from a different graph (hash mismatch)");
  }
}

}  // namespace gprop

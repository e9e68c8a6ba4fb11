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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gprop/graph.hpp"

namespace gprop {

/// One shard of a target-node partitioning. Rows of the sub-CSR are the
/// owned targets in ascending id order; sources keep their global ids.
struct Partition {
  std::uint32_t index = 0;  // 1-based
  std::uint32_t num_parts = 0;
  std::uint64_t global_num_nodes = 0;
  std::vector<NodeId> owned_targets;
  std::vector<std::uint64_t> row_ptr;
  std::vector<NodeId> src_idx;
  std::vector<double> weights;  // empty when unweighted
  bool weighted = false;
  bool directed = true;

  std::uint64_t edge_load() const noexcept { return src_idx.size(); }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Sorts nodes by non-increasing in-degree (ties by ascending id), takes
/// prefix sums C_i of in-degrees with total W = M, and assigns the i-th node
/// to shard ceil(d * C_i / W). Shards may be empty when one node's in-degree
/// exceeds M/d.
std::vector<Partition> generate_partition(const CsrGraph& graph, std::uint32_t n_parts);

/// Shard assignment only: result[v] is the 1-based shard of node v.
std::vector<std::uint32_t> assign_targets(std::span<const std::uint64_t> in_degrees,
                                          std::uint32_t n_parts);

struct PartitionManifest {
  std::uint32_t num_parts = 0;
  std::uint64_t global_num_nodes = 0;
  std::uint64_t num_edges = 0;
  std::uint32_t format_version = 0;
  std::uint64_t graph_hash = 0;
  bool weighted = false;
  bool directed = true;
  std::vector<std::uint64_t> shard_hashes;  // FNV-1a of each shard file
};

inline constexpr std::uint32_t kManifestFormatVersion = 1;

/// Writes `<root>/manifest.json` and `<root>/part_<q>.gprc` for q = 1..d.
PartitionManifest save_partitions(std::span<const Partition> parts, std::uint64_t graph_hash,
                                  const std::filesystem::path& root);

PartitionManifest load_manifest(const std::filesystem::path& root);

/// Loads shard `partition_idx` (1-based), checking it against the manifest's
/// recorded shard hash.
Partition load_partition(const std::filesystem::path& root, std::uint32_t partition_idx);

/// Throws ErrorKind::Integrity unless the manifest was generated from `graph`.
void check_manifest_matches(const PartitionManifest& manifest, const CsrGraph& graph);

/// Exhaustive disjoint-cover check; throws ErrorKind::Integrity on overlap
/// or a missing target.
void check_disjoint_cover(std::span<const Partition> parts, std::uint64_t num_nodes);

}  // namespace gprop

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
#include <optional>
#include <span>
#include <vector>

namespace gprop {

using NodeId = std::uint64_t;

/// In-CSR: row v lists the sources of the edges that target v. Immutable
/// after construction; safe to share across threads.
class CsrGraph {
 public:
  CsrGraph() = default;

  /// Validates every structural invariant and throws ErrorKind::Validation on
  /// the first violation.
  CsrGraph(std::uint64_t num_nodes, std::vector<std::uint64_t> row_ptr,
           std::vector<NodeId> src_idx, std::optional<std::vector<double>> weights,
           bool directed);

  std::uint64_t num_nodes() const noexcept { return num_nodes_; }
  std::uint64_t num_edges() const noexcept { return src_idx_.size(); }
  bool weighted() const noexcept { return weights_.has_value(); }
  bool directed() const noexcept { return directed_; }

  std::span<const std::uint64_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const NodeId> src_idx() const noexcept { return src_idx_; }
  /// Empty for unweighted graphs.
  std::span<const double> weights() const noexcept {
    return weights_ ? std::span<const double>(*weights_) : std::span<const double>();
  }

  std::span<const NodeId> in_neighbors(NodeId v) const noexcept {
    return std::span<const NodeId>(src_idx_).subspan(row_ptr_[v], row_ptr_[v + 1] - row_ptr_[v]);
  }
  std::uint64_t in_degree(NodeId v) const noexcept { return row_ptr_[v + 1] - row_ptr_[v]; }

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;

 private:
  std::uint64_t num_nodes_ = 0;
  std::vector<std::uint64_t> row_ptr_{0};
  std::vector<NodeId> src_idx_;
  std::optional<std::vector<double>> weights_;
  bool directed_ = true;
};

struct Edge {
  NodeId source;
  NodeId target;
  double weight = 1.0;
};

/// Builds the in-CSR from an edge sequence. Within a target's segment, edges
/// keep their order of appearance. When `directed` is false each edge (u,v)
/// also yields (v,u) right after it. Multi-edges and self-loops are kept.
CsrGraph build_csr(std::uint64_t num_nodes, std::span<const Edge> edges, bool weighted,
                   bool directed);

struct EdgeListOptions {
  bool directed = true;
  bool weighted = false;
  /// Map arbitrary external ids onto 0..N-1 in order of first appearance.
  bool remap_ids = false;
};

/// Text edge list: `u v` or `u v w` per line, `#` comments, optional
/// `% nodes=N` header. When remapping, `external_ids` (if given) receives the
/// external id of each dense node id.
CsrGraph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options,
                        std::vector<std::uint64_t>* external_ids = nullptr);

/// Binary CSR ("GPRC") format.
void save_binary(const CsrGraph& graph, const std::filesystem::path& path);
CsrGraph load_binary(const std::filesystem::path& path);

/// Dispatches on extension: `.gprc` is binary, anything else a text edge list.
CsrGraph load_graph(const std::filesystem::path& path, const EdgeListOptions& options);

std::vector<std::uint64_t> in_degree(const CsrGraph& graph);

/// Sorted, duplicate-free node ids.
using SeedSet = std::vector<NodeId>;

/// The floor(fraction * N) nodes of highest in-degree, ties broken by
/// ascending id, returned sorted by id.
SeedSet degree_centrality_seeds(std::span<const std::uint64_t> in_degrees, double fraction);
SeedSet degree_centrality_seeds(const CsrGraph& graph, double fraction);

/// Sorts, dedups and range-checks an explicit seed list.
SeedSet make_seed_set(std::vector<NodeId> ids, std::uint64_t num_nodes);

/// 64-bit FNV-1a over (N, M, row_ptr, src_idx) as little-endian u64 words.
std::uint64_t graph_hash(const CsrGraph& graph);

}  // namespace gprop

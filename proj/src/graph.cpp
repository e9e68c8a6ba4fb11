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

#include "gprop/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <unordered_map>

#include "gprc_format.hpp"
#include "gprop/error.hpp"

namespace gprop {

CsrGraph::CsrGraph(std::uint64_t num_nodes, std::vector<std::uint64_t> row_ptr,
                   std::vector<NodeId> src_idx, std::optional<std::vector<double>> weights,
                   bool directed)
    : num_nodes_(num_nodes),
      row_ptr_(std::move(row_ptr)),
      src_idx_(std::move(src_idx)),
      weights_(std::move(weights)),
      directed_(directed) {
  if (row_ptr_.size() != num_nodes_ + 1) {
    fail(ErrorKind::Validation, "row_ptr must have N+1 entries");
  }
  if (row_ptr_.front() != 0 || row_ptr_.back() != src_idx_.size()) {
    fail(ErrorKind::Validation, "row_ptr must start at 0 and end at M");
  }
  for (std::size_t v = 0; v < num_nodes_; ++v) {
    if (row_ptr_[v + 1] < row_ptr_[v]) {
      fail(ErrorKind::Validation, "row_ptr decreases at node " + std::to_string(v));
    }
  }
  for (std::size_t e = 0; e < src_idx_.size(); ++e) {
    if (src_idx_[e] >= num_nodes_) {
      fail(ErrorKind::Validation, "edge " + std::to_string(e) + " has source " +
                                      std::to_string(src_idx_[e]) + " outside [0, N)");
    }
  }
  if (weights_) {
    if (weights_->size() != src_idx_.size()) {
      fail(ErrorKind::Validation, "weights must have M entries");
    }
    for (std::size_t e = 0; e < weights_->size(); ++e) {
      const double w = (*weights_)[e];
      if (!std::isfinite(w) || w <= 0.0) {
        fail(ErrorKind::Validation, "edge " + std::to_string(e) + " has non-positive or non-finite weight");
      }
    }
  }
}

CsrGraph build_csr(std::uint64_t num_nodes, std::span<const Edge> edges, bool weighted,
                   bool directed) {
  const std::size_t m = directed ? edges.size() : 2 * edges.size();
  std::vector<std::uint64_t> row_ptr(num_nodes + 1, 0);
  auto count = [&](NodeId target) {
    if (target >= num_nodes) {
      fail(ErrorKind::Validation, "node id " + std::to_string(target) + " outside [0, N)");
    }
    ++row_ptr[target + 1];
  };
  for (const auto& e : edges) {
    if (e.source >= num_nodes) {
      fail(ErrorKind::Validation, "node id " + std::to_string(e.source) + " outside [0, N)");
    }
    count(e.target);
    if (!directed) count(e.source);
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());

  std::vector<std::uint64_t> cursor(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<NodeId> src(m);
  std::optional<std::vector<double>> w;
  if (weighted) w.emplace(m);
  auto place = [&](NodeId s, NodeId t, double weight) {
    const auto slot = cursor[t]++;
    src[slot] = s;
    if (w) (*w)[slot] = weight;
  };
  for (const auto& e : edges) {
    place(e.source, e.target, e.weight);
    if (!directed) place(e.target, e.source, e.weight);
  }
  return CsrGraph(num_nodes, std::move(row_ptr), std::move(src), std::move(w), directed);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n\v\f");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n\v\f");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line,
                              const std::string& what) {
  fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::uint64_t parse_id(std::string_view tok, const std::filesystem::path& path, std::size_t line) {
  if (!tok.empty() && tok.front() == '-') parse_error(path, line, "negative node id '" + std::string(tok) + "'");
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_error(path, line, "invalid node id '" + std::string(tok) + "'");
  }
  return v;
}

double parse_weight(std::string_view tok, const std::filesystem::path& path, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_error(path, line, "invalid weight '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

CsrGraph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options,
                        std::vector<std::uint64_t>* external_ids) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open graph file " + path.string());

  std::vector<Edge> edges;
  std::optional<std::uint64_t> header_nodes;
  std::unordered_map<std::uint64_t, NodeId> remap;
  std::vector<std::uint64_t> ext;
  auto map_id = [&](std::uint64_t id) -> NodeId {
    if (!options.remap_ids) return id;
    auto [it, inserted] = remap.try_emplace(id, ext.size());
    if (inserted) ext.push_back(id);
    return it->second;
  };

  std::string raw;
  std::size_t line_no = 0;
  std::uint64_t max_id = 0;
  bool any = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '%') {
      const auto body = trim(line.substr(1));
      constexpr std::string_view key = "nodes=";
      if (body.substr(0, key.size()) != key) parse_error(path, line_no, "unrecognised header");
      header_nodes = parse_id(trim(body.substr(key.size())), path, line_no);
      continue;
    }
    std::string_view tokens[4];
    std::size_t n = 0;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto b = line.find_first_not_of(" \t\r\v\f", pos);
      if (b == std::string_view::npos) break;
      auto e = line.find_first_of(" \t\r\v\f", b);
      if (e == std::string_view::npos) e = line.size();
      if (n == 4) break;
      tokens[n++] = line.substr(b, e - b);
      pos = e;
    }
    if (n < 2 || n > 3) {
      parse_error(path, line_no, "expected 'u v' or 'u v w', got " + std::to_string(n) + " tokens");
    }
    if (options.weighted && n != 3) parse_error(path, line_no, "weighted graph requires a weight");
    const auto u = parse_id(tokens[0], path, line_no);
    const auto v = parse_id(tokens[1], path, line_no);
    double w = 1.0;
    if (n == 3) {
      w = parse_weight(tokens[2], path, line_no);
      if (options.weighted && (!std::isfinite(w) || w <= 0.0)) {
        fail(ErrorKind::Validation, path.string() + ":" + std::to_string(line_no) +
                                        ": weight must be finite and positive");
      }
    }
    const NodeId su = map_id(u);
    const NodeId sv = map_id(v);
    max_id = std::max({max_id, su, sv});
    any = true;
    edges.push_back({su, sv, w});
  }
  if (in.bad()) fail(ErrorKind::Io, "read failed: " + path.string());
  if (!any) fail(ErrorKind::Validation, path.string() + ": graph has no edges");

  std::uint64_t num_nodes = options.remap_ids ? ext.size() : max_id + 1;
  if (header_nodes) {
    if (*header_nodes < num_nodes) {
      fail(ErrorKind::Validation, path.string() + ": header declares " + std::to_string(*header_nodes) +
                                      " nodes but ids reach " + std::to_string(num_nodes - 1));
    }
    num_nodes = *header_nodes;
  }
  if (external_ids) *external_ids = std::move(ext);
  return build_csr(num_nodes, edges, options.weighted, options.directed);
}

void save_binary(const CsrGraph& graph, const std::filesystem::path& path) {
  detail::GprcContents c;
  c.flags = static_cast<std::uint16_t>((graph.weighted() ? detail::kFlagWeighted : 0) |
                                       (graph.directed() ? detail::kFlagDirected : 0));
  c.rows = graph.num_nodes();
  c.row_ptr.assign(graph.row_ptr().begin(), graph.row_ptr().end());
  c.src_idx.assign(graph.src_idx().begin(), graph.src_idx().end());
  c.weights.assign(graph.weights().begin(), graph.weights().end());
  detail::write_file(path, detail::encode_gprc(c));
}

CsrGraph load_binary(const std::filesystem::path& path) {
  auto c = detail::decode_gprc(detail::read_file(path), path.string());
  if (c.flags & detail::kFlagPartition) {
    fail(ErrorKind::Validation, path.string() + " is a partition shard, not a graph");
  }
  std::optional<std::vector<double>> w;
  if (c.flags & detail::kFlagWeighted) w = std::move(c.weights);
  return CsrGraph(c.rows, std::move(c.row_ptr), std::move(c.src_idx), std::move(w),
                  (c.flags & detail::kFlagDirected) != 0);
}

CsrGraph load_graph(const std::filesystem::path& path, const EdgeListOptions& options) {
  if (path.extension() == ".gprc") return load_binary(path);
  return load_edge_list(path, options);
}

std::vector<std::uint64_t> in_degree(const CsrGraph& graph) {
  std::vector<std::uint64_t> deg(graph.num_nodes());
  const auto rp = graph.row_ptr();
  for (std::size_t v = 0; v < deg.size(); ++v) deg[v] = rp[v + 1] - rp[v];
  return deg;
}

SeedSet degree_centrality_seeds(std::span<const std::uint64_t> in_degrees, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorKind::Validation, "seed fraction must be in (0, 1]");
  }
  // Same truncation as int(N * fraction).
  const auto k = static_cast<std::size_t>(static_cast<double>(in_degrees.size()) * fraction);
  if (k == 0) fail(ErrorKind::Validation, "seed fraction selects zero nodes");
  std::vector<NodeId> order(in_degrees.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](NodeId a, NodeId b) {
                      if (in_degrees[a] != in_degrees[b]) return in_degrees[a] > in_degrees[b];
                      return a < b;
                    });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

SeedSet degree_centrality_seeds(const CsrGraph& graph, double fraction) {
  const auto deg = in_degree(graph);
  return degree_centrality_seeds(deg, fraction);
}

SeedSet make_seed_set(std::vector<NodeId> ids, std::uint64_t num_nodes) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (!ids.empty() && ids.back() >= num_nodes) {
    fail(ErrorKind::Validation, "seed id " + std::to_string(ids.back()) + " outside [0, " +
                                    std::to_string(num_nodes) + ")");
  }
  return ids;
}

std::uint64_t graph_hash(const CsrGraph& graph) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto word = [&](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    h = detail::fnv1a64(b, 8, h);
  };
  word(graph.num_nodes());
  word(graph.num_edges());
  for (auto v : graph.row_ptr()) word(v);
  for (auto v : graph.src_idx()) word(v);
  return h;
}

}  // namespace gprop

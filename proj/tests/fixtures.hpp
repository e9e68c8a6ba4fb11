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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "gprop/graph.hpp"

namespace fixtures {

using gprop::CsrGraph;
using gprop::Edge;

/// Random multigraph; self-loops and repeated edges allowed.
inline CsrGraph random_graph(std::uint64_t n, std::uint64_t m, std::uint64_t seed, bool weighted = false,
                             bool directed = true) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> node(0, n - 1);
  std::uniform_real_distribution<double> w(0.25, 3.0);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) edges.push_back({node(rng), node(rng), weighted ? w(rng) : 1.0});
  return gprop::build_csr(n, edges, weighted, directed);
}

/// Heavy-tailed in-degrees: targets drawn with probability ~ 1/(rank+1).
inline CsrGraph skewed_graph(std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> weights(n);
  for (std::uint64_t i = 0; i < n; ++i) weights[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::uint64_t> target(weights.begin(), weights.end());
  std::uniform_int_distribution<std::uint64_t> node(0, n - 1);
  std::vector<Edge> edges;
  for (std::uint64_t i = 0; i < m; ++i) edges.push_back({node(rng), target(rng), 1.0});
  return gprop::build_csr(n, edges, false, true);
}

inline CsrGraph from_edges(std::uint64_t n, std::vector<Edge> edges, bool directed = true, bool weighted = false) {
  return gprop::build_csr(n, edges, weighted, directed);
}

inline CsrGraph triangle() { return from_edges(3, {{0, 1}, {1, 2}, {0, 2}}, false); }

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("gprop_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

inline void write_edge_list(const std::filesystem::path& p, const CsrGraph& g) {
  std::ofstream out(p);
  out << "% nodes=" << g.num_nodes() << "\n";
  for (gprop::NodeId v = 0; v < g.num_nodes(); ++v) {
    for (auto e = g.row_ptr()[v]; e < g.row_ptr()[v + 1]; ++e) out << g.src_idx()[e] << " " << v << "\n";
  }
}

}  // namespace fixtures

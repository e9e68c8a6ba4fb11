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

// Reference implementation used only by the tests: a plain per-node loop over
// in-edges with no batching, no log-space arithmetic and no shared code with
// the engine kernels.

#include <cstdint>
#include <functional>
#include <vector>

#include "gprop/graph.hpp"
#include "gprop/models.hpp"
#include "gprop/rng.hpp"

namespace gprop::oracle {

/// One simulation's node states. `labels` uses the model's label codes; HK
/// additionally keeps the raw opinions.
struct NodeStates {
  std::vector<std::uint8_t> labels;
  std::vector<double> opinions;

  friend bool operator==(const NodeStates&, const NodeStates&) = default;
};

/// Source of every random decision the oracle makes.
class Decider {
 public:
  virtual ~Decider() = default;
  virtual bool bernoulli(double p, const RngKey& key) = 0;
  virtual std::uint64_t pick(std::uint64_t n, const RngKey& key) = 0;
};

/// Decides with the counter-based generator, i.e. the same stream the engine
/// reads for a given key.
class KeyedDecider final : public Decider {
 public:
  bool bernoulli(double p, const RngKey& key) override { return uniform(key) < p; }
  std::uint64_t pick(std::uint64_t n, const RngKey& key) override { return uniform_int(key, n); }
};

NodeStates initial_state(const ModelSpec& model, const CsrGraph& graph, const SeedSet& seeds,
                         std::uint64_t master_seed, std::uint32_t sim_index);

/// Computes state `step` from state `step - 1`. Cascade activations are
/// per-edge trials keyed by CSR edge index.
NodeStates step(const ModelSpec& model, const CsrGraph& graph, const NodeStates& prev,
                std::uint64_t master_seed, std::uint32_t sim_index, std::uint32_t step, Decider& decider);

inline constexpr std::uint64_t kNaiveNodeLimit = 10000;

/// Final state of one keyed epoch. Graphs above kNaiveNodeLimit nodes raise
/// ErrorKind::Validation unless `allow_large`.
NodeStates naive_epoch(const ModelSpec& model, const CsrGraph& graph, const SeedSet& seeds, std::uint32_t steps,
                       std::uint32_t sim_index, std::uint64_t master_seed, bool allow_large = false);

/// counts[t][label] for t = 0..steps of one keyed simulation.
std::vector<std::vector<std::uint64_t>> keyed_trajectory(const ModelSpec& model, const CsrGraph& graph,
                                                         const SeedSet& seeds, std::uint64_t master_seed,
                                                         std::uint32_t sim_index, std::uint32_t steps,
                                                         NodeStates* final_state = nullptr);

/// Exact expectation of `f(final state)` after `steps` steps, by enumerating
/// every outcome of every random decision. Throws when the outcome tree has
/// more than `max_leaves` leaves.
double exact_expectation(const ModelSpec& model, const CsrGraph& graph, const SeedSet& seeds,
                         std::uint32_t steps, const std::function<double(const NodeStates&)>& f,
                         std::uint64_t max_leaves = 1u << 20);

/// Number of nodes with a label other than the first.
double spread(const NodeStates& s);

}  // namespace gprop::oracle

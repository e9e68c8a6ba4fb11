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

// Per-model message / aggregate / update kernels. Both the single-process
// engine and the distributed workers call into here, which is what makes
// their outputs bit-identical.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gprop/graph.hpp"
#include "gprop/models.hpp"
#include "gprop/rng.hpp"
#include "gprop/state.hpp"

namespace gprop::detail {

/// The in-CSR rows a caller is responsible for. `targets` maps row -> global
/// node id; when empty, row r is node r. Source ids are always global.
struct RowSource {
  std::span<const std::uint64_t> row_ptr;
  std::span<const NodeId> src;
  std::span<const double> weights;
  std::span<const NodeId> targets;

  std::size_t rows() const noexcept { return row_ptr.size() - 1; }
  NodeId target(std::size_t r) const noexcept { return targets.empty() ? r : targets[r]; }
};

inline RowSource whole_graph(const CsrGraph& g) {
  return {g.row_ptr(), g.src_idx(), g.weights(), {}};
}

/// Keys for the step being computed: `step` is the index of the new state.
struct KeyBase {
  std::uint64_t master_seed;
  std::uint64_t sim_offset;
  std::uint32_t step;

  RngKey key(std::size_t lane, NodeId node, DrawTag tag) const noexcept {
    return {master_seed, static_cast<std::uint32_t>(sim_offset + lane), step, node, tag};
  }
};

/// Computes rows [row_lo, row_hi) of a synchronous model's next state into
/// `out`, whose node dimension is indexed by row.
void compute_sync_rows(const ModelSpec& model, const RowSource& rows, const StateBatch& prev,
                       const KeyBase& keys, StateBatch& out, std::size_t row_lo, std::size_t row_hi);

/// Maps a global node id to the caller's row, or -1 when not owned.
using RowLookup = std::span<const std::int64_t>;

/// Applies an asynchronous model's updates for lanes [lane_lo, lane_hi) to
/// `out`, which must already hold the previous state of every owned row.
/// Only owned nodes are written; every caller draws the same node picks.
void compute_async_lanes(const ModelSpec& model, const RowSource& rows, RowLookup row_of,
                         std::uint64_t num_nodes, const StateBatch& prev, const KeyBase& keys,
                         StateBatch& out, std::size_t lane_lo, std::size_t lane_hi);

/// Copies the previous state of each row's target into `out`.
void copy_rows(const RowSource& rows, const StateBatch& prev, StateBatch& out, std::size_t row_lo,
               std::size_t row_hi);

/// True when running further steps cannot change the state: IC has no
/// newly-active node, Threshold's last step changed nothing.
bool settled(const ModelSpec& model, const StateBatch& state, bool stepped, bool last_step_changed);

}  // namespace gprop::detail

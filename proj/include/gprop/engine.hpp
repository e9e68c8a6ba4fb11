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
#include <memory>

#include "gprop/graph.hpp"
#include "gprop/models.hpp"
#include "gprop/results.hpp"
#include "gprop/state.hpp"

namespace gprop {

namespace detail {
class ThreadPool;
}

struct EngineOptions {
  /// Worker threads for a step; 0 picks the hardware concurrency. Output does
  /// not depend on this value.
  std::size_t threads = 1;
  /// Upper bound on state memory for one batched pass; 0 means 75% of
  /// physical memory.
  std::uint64_t memory_cap_bytes = 0;
  /// Step cap for Steps::converge(); 0 means 10 * N.
  std::uint64_t converge_step_cap = 0;
  /// Keep every epoch's final state in EpochResults::final_states.
  bool keep_final_states = false;
};

/// 75% of physical memory, or 4 GiB if it cannot be determined.
std::uint64_t default_memory_cap();

/// Initial states for `lanes` lanes starting at `sim_offset`. Seeded nodes
/// start infected / active / at opinion 1; HK draws each lane's opinions
/// uniformly in [-1, 1) from OpinionInit keys.
StateBatch init_states(const ModelSpec& model, std::uint64_t num_nodes, const SeedSet& seeds,
                       std::size_t lanes, std::uint64_t sim_offset, std::uint64_t master_seed);

/// Validates seeds against the model and node count.
void check_seeds(const ModelSpec& model, const SeedSet& seeds, std::uint64_t num_nodes);

/// Bytes a pass of `lanes` lanes needs (both state buffers).
std::uint64_t pass_memory_estimate(const ModelSpec& model, std::uint64_t num_nodes, std::size_t lanes);

/// Batched synchronous executor for one model over one graph.
class Engine {
 public:
  Engine(std::shared_ptr<const CsrGraph> graph, ModelSpec model, std::uint64_t master_seed,
         EngineOptions options = {});
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  const CsrGraph& graph() const noexcept { return *graph_; }
  const ModelSpec& model() const noexcept { return model_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  const EngineOptions& options() const noexcept { return options_; }

  StateBatch init_states(const SeedSet& seeds, std::size_t lanes, std::uint64_t sim_offset) const;

  /// One synchronous step: reads only `prev`, writes every cell of `next`
  /// (reshaped if needed), and sets next.step() = prev.step() + 1.
  void step(const StateBatch& prev, StateBatch& next);
  StateBatch step(const StateBatch& prev);

  /// ceil(epochs / batch_size) passes; lane b of pass p is sim index
  /// p * batch_size + b. Per-epoch results do not depend on batch_size.
  EpochResults run_epochs(const SeedSet& seeds, std::uint64_t epochs, Steps steps,
                          std::size_t batch_size);

  std::uint64_t step_cap() const noexcept;

 private:
  std::shared_ptr<const CsrGraph> graph_;
  ModelSpec model_;
  std::uint64_t master_seed_;
  EngineOptions options_;
  std::unique_ptr<detail::ThreadPool> pool_;
};

/// Stateful handle behind the four run interfaces: the current batch
/// survives between calls.
class Simulation {
 public:
  Simulation(std::shared_ptr<const CsrGraph> graph, ModelSpec model, SeedSet seeds,
             std::uint64_t master_seed, EngineOptions options = {});

  const StateBatch& state() const noexcept { return state_; }
  const SeedSet& seeds() const noexcept { return seeds_; }
  Engine& engine() noexcept { return engine_; }

  /// One step from the current state.
  const StateBatch& run_iteration();
  /// `times` steps from the current state.
  const StateBatch& run_iterations(std::uint64_t times);
  /// Resets to the initial state of the next sim index (0, 1, 2, ... across
  /// calls) and runs `times` steps.
  const StateBatch& run_epoch(std::uint64_t times);
  /// As run_epoch, with an explicit sim index.
  const StateBatch& run_epoch_at(std::uint64_t times, std::uint64_t sim_index);
  EpochResults run_epochs(std::uint64_t epochs, Steps steps, std::size_t batch_size);

  /// Back to the single-lane initial state of `sim_index`.
  void reset(std::uint64_t sim_index = 0);

 private:
  Engine engine_;
  SeedSet seeds_;
  StateBatch state_;
  StateBatch scratch_;
  std::uint64_t next_epoch_ = 0;
};

}  // namespace gprop

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

#include "gprop/engine.hpp"

#include <unistd.h>

#include <algorithm>
#include <thread>

#include "gprop/error.hpp"
#include "gprop/rng.hpp"
#include "kernels.hpp"
#include "thread_pool.hpp"

namespace gprop {

std::uint64_t default_memory_cap() {
  const long pages = ::sysconf(_SC_PHYS_PAGES);
  const long page_size = ::sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page_size <= 0) return 4ull << 30;
  return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page_size) / 4 * 3;
}

void check_seeds(const ModelSpec& model, const SeedSet& seeds, std::uint64_t num_nodes) {
  if (model.requires_seeds() && seeds.empty()) {
    fail(ErrorKind::Validation, std::string("model ") + std::string(model.name()) + " requires a non-empty seed set");
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i] >= num_nodes) {
      fail(ErrorKind::Validation, "seed " + std::to_string(seeds[i]) + " outside [0, N)");
    }
    if (i > 0 && seeds[i] <= seeds[i - 1]) {
      fail(ErrorKind::Validation, "seed set must be sorted and duplicate-free");
    }
  }
}

std::uint64_t pass_memory_estimate(const ModelSpec& model, std::uint64_t num_nodes, std::size_t lanes) {
  std::uint64_t per_cell = 0;
  for (const auto& c : model.channels()) per_cell += c.kind == ChannelKind::Discrete ? 1 : sizeof(double);
  return 2 * per_cell * num_nodes * lanes;
}

StateBatch init_states(const ModelSpec& model, std::uint64_t num_nodes, const SeedSet& seeds,
                       std::size_t lanes, std::uint64_t sim_offset, std::uint64_t master_seed) {
  if (lanes == 0) fail(ErrorKind::Validation, "batch needs at least one lane");
  if (sim_offset + lanes > (std::uint64_t{1} << 32)) {
    fail(ErrorKind::Validation, "sim index exceeds the 32-bit key range");
  }
  check_seeds(model, seeds, num_nodes);
  StateBatch s(model.channels(), lanes, num_nodes, sim_offset, 0);
  if (model.stochastic_init()) {
    auto x = s.continuous(0);
    for (std::uint64_t i = 0; i < num_nodes; ++i) {
      for (std::size_t b = 0; b < lanes; ++b) {
        const RngKey key{master_seed, static_cast<std::uint32_t>(sim_offset + b), 0, i, DrawTag::OpinionInit};
        x[i * lanes + b] = 2.0 * uniform(key) - 1.0;
      }
    }
    return s;
  }
  std::size_t channel = 0;
  std::uint8_t value = 1;
  switch (model.id()) {
    case ModelId::SEIR_DT: channel = 1; break;
    case ModelId::IC: value = kNewlyActive; break;
    default: break;
  }
  auto cells = s.discrete(channel);
  for (NodeId v : seeds) std::fill_n(cells.begin() + static_cast<std::ptrdiff_t>(v * lanes), lanes, value);
  return s;
}

Engine::Engine(std::shared_ptr<const CsrGraph> graph, ModelSpec model, std::uint64_t master_seed,
               EngineOptions options)
    : graph_(std::move(graph)), model_(std::move(model)), master_seed_(master_seed), options_(options) {
  if (!graph_) fail(ErrorKind::Contract, "engine needs a graph");
  model_.check_graph(*graph_);
  if (options_.threads == 0) options_.threads = std::max(1u, std::thread::hardware_concurrency());
  if (options_.memory_cap_bytes == 0) options_.memory_cap_bytes = default_memory_cap();
  pool_ = std::make_unique<detail::ThreadPool>(options_.threads);
}

Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

std::uint64_t Engine::step_cap() const noexcept {
  return options_.converge_step_cap ? options_.converge_step_cap : 10 * graph_->num_nodes();
}

StateBatch Engine::init_states(const SeedSet& seeds, std::size_t lanes, std::uint64_t sim_offset) const {
  return gprop::init_states(model_, graph_->num_nodes(), seeds, lanes, sim_offset, master_seed_);
}

void Engine::step(const StateBatch& prev, StateBatch& next) {
  if (prev.nodes() != graph_->num_nodes() || prev.num_channels() != model_.channels().size()) {
    fail(ErrorKind::Contract, "state batch does not match the model's channels or the graph");
  }
  for (std::size_t c = 0; c < prev.num_channels(); ++c) {
    if (prev.is_discrete(c) != (model_.channels()[c].kind == ChannelKind::Discrete)) {
      fail(ErrorKind::Contract, "channel kind mismatch for channel " + model_.channels()[c].name);
    }
  }
  if (&prev == &next) fail(ErrorKind::Contract, "step needs distinct input and output batches");
  if (prev.step() == UINT32_MAX) fail(ErrorKind::Validation, "step counter overflow");
  if (next.lanes() != prev.lanes() || next.nodes() != prev.nodes() || next.num_channels() != prev.num_channels() ||
      next.sim_offset() != prev.sim_offset()) {
    next = StateBatch(model_.channels(), prev.lanes(), prev.nodes(), prev.sim_offset(), prev.step());
  }
  const detail::RowSource rows = detail::whole_graph(*graph_);
  const detail::KeyBase keys{master_seed_, prev.sim_offset(), prev.step() + 1};
  if (model_.iteration_mode() == IterationMode::Synchronous) {
    pool_->parallel_for(rows.rows(), [&](std::size_t lo, std::size_t hi) {
      detail::compute_sync_rows(model_, rows, prev, keys, next, lo, hi);
    });
  } else {
    next.channel_data() = prev.channel_data();
    pool_->parallel_for(prev.lanes(), [&](std::size_t lo, std::size_t hi) {
      detail::compute_async_lanes(model_, rows, {}, graph_->num_nodes(), prev, keys, next, lo, hi);
    });
  }
  next.set_step(prev.step() + 1);
}

StateBatch Engine::step(const StateBatch& prev) {
  StateBatch next;
  step(prev, next);
  return next;
}

EpochResults Engine::run_epochs(const SeedSet& seeds, std::uint64_t epochs, Steps steps,
                                std::size_t batch_size) {
  if (epochs == 0) fail(ErrorKind::Validation, "epochs must be >= 1");
  if (batch_size == 0) fail(ErrorKind::Validation, "batch_size must be >= 1");
  if (epochs > (std::uint64_t{1} << 32)) fail(ErrorKind::Validation, "epochs exceed the 32-bit sim index range");
  if (steps.until_converged && !model_.has_fixed_point()) {
    fail(ErrorKind::Validation, std::string("model ") + std::string(model_.name()) +
                                    " has no guaranteed fixed point; give an explicit step count");
  }
  check_seeds(model_, seeds, graph_->num_nodes());
  const std::size_t lanes_max = static_cast<std::size_t>(std::min<std::uint64_t>(batch_size, epochs));
  const auto need = pass_memory_estimate(model_, graph_->num_nodes(), lanes_max);
  if (need > options_.memory_cap_bytes) {
    fail(ErrorKind::Resource, "a batch of " + std::to_string(lanes_max) + " lanes needs " + std::to_string(need) +
                                  " bytes, above the memory cap of " + std::to_string(options_.memory_cap_bytes) +
                                  "; use a smaller batch_size");
  }
  const std::uint64_t limit = steps.until_converged ? step_cap() : steps.count;

  ResultsAccumulator acc(model_, epochs, options_.keep_final_states);
  StateBatch next;
  for (std::uint64_t first = 0; first < epochs; first += batch_size) {
    const auto lanes = static_cast<std::size_t>(std::min<std::uint64_t>(batch_size, epochs - first));
    StateBatch cur = init_states(seeds, lanes, first);
    acc.begin_pass(first, lanes);
    acc.record_step(cur);
    bool changed = true;
    for (std::uint64_t t = 0; t < limit; ++t) {
      if (steps.until_converged && detail::settled(model_, cur, t > 0, changed)) break;
      step(cur, next);
      if (steps.until_converged) changed = !next.same_cells(cur);
      std::swap(cur, next);
      acc.record_step(cur);
    }
    acc.end_pass(cur);
  }
  return acc.finish(master_seed_, steps);
}

Simulation::Simulation(std::shared_ptr<const CsrGraph> graph, ModelSpec model, SeedSet seeds,
                       std::uint64_t master_seed, EngineOptions options)
    : engine_(std::move(graph), std::move(model), master_seed, options), seeds_(std::move(seeds)) {
  check_seeds(engine_.model(), seeds_, engine_.graph().num_nodes());
  reset(0);
}

void Simulation::reset(std::uint64_t sim_index) { state_ = engine_.init_states(seeds_, 1, sim_index); }

const StateBatch& Simulation::run_iteration() {
  engine_.step(state_, scratch_);
  std::swap(state_, scratch_);
  return state_;
}

const StateBatch& Simulation::run_iterations(std::uint64_t times) {
  for (std::uint64_t t = 0; t < times; ++t) run_iteration();
  return state_;
}

const StateBatch& Simulation::run_epoch(std::uint64_t times) { return run_epoch_at(times, next_epoch_++); }

const StateBatch& Simulation::run_epoch_at(std::uint64_t times, std::uint64_t sim_index) {
  reset(sim_index);
  return run_iterations(times);
}

EpochResults Simulation::run_epochs(std::uint64_t epochs, Steps steps, std::size_t batch_size) {
  return engine_.run_epochs(seeds_, epochs, steps, batch_size);
}

}  // namespace gprop

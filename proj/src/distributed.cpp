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

#include "gprop/distributed.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "gprop/engine.hpp"
#include "gprop/error.hpp"
#include "kernels.hpp"

namespace gprop {

void merge_states(std::span<const SyncMessage> messages, std::span<const std::vector<NodeId>> owned_by_part,
                  StateBatch& global) {
  const std::size_t lanes = global.lanes();
  std::vector<std::uint8_t> covered(global.nodes(), 0);
  for (const auto& msg : messages) {
    if (msg.part < 1 || msg.part > owned_by_part.size()) {
      fail(ErrorKind::Protocol, "message from unknown shard " + std::to_string(msg.part));
    }
    if (msg.step != messages.front().step) fail(ErrorKind::Protocol, "messages from different steps");
    if (msg.lane_hi - msg.lane_lo != lanes) fail(ErrorKind::Protocol, "message lane range does not match the batch");
    if (msg.channels.size() != global.num_channels()) fail(ErrorKind::Protocol, "message channel count mismatch");
    const auto& owned = owned_by_part[msg.part - 1];
    for (NodeId v : owned) {
      if (v >= covered.size()) fail(ErrorKind::Protocol, "shard target outside the global node range");
      if (covered[v]) {
        fail(ErrorKind::Protocol, "node " + std::to_string(v) + " updated by more than one shard");
      }
      covered[v] = 1;
    }
    for (std::size_t c = 0; c < msg.channels.size(); ++c) {
      auto place = [&](const auto& src, auto dst) {
        if (src.size() != owned.size() * lanes) fail(ErrorKind::Protocol, "message payload size mismatch");
        for (std::size_t r = 0; r < owned.size(); ++r) {
          std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(r * lanes), lanes,
                      dst.begin() + static_cast<std::ptrdiff_t>(owned[r] * lanes));
        }
      };
      if (global.is_discrete(c)) {
        const auto* src = std::get_if<std::vector<std::uint8_t>>(&msg.channels[c]);
        if (!src) fail(ErrorKind::Protocol, "message channel kind mismatch");
        place(*src, global.discrete(c));
      } else {
        const auto* src = std::get_if<std::vector<double>>(&msg.channels[c]);
        if (!src) fail(ErrorKind::Protocol, "message channel kind mismatch");
        place(*src, global.continuous(c));
      }
    }
  }
  for (std::size_t v = 0; v < covered.size(); ++v) {
    if (!covered[v]) fail(ErrorKind::Protocol, "node " + std::to_string(v) + " missing from the merged state");
  }
}

namespace {

/// Coordinator -> workers control: a generation-stamped snapshot pointer.
class StepBroadcast {
 public:
  void publish(std::shared_ptr<const StateBatch> snapshot) {
    {
      std::lock_guard lock(mutex_);
      snapshot_ = std::move(snapshot);
      ++generation_;
    }
    cv_.notify_all();
  }

  void stop() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
      ++generation_;
    }
    cv_.notify_all();
  }

  /// Blocks until a generation newer than `seen`; returns null on stop.
  std::shared_ptr<const StateBatch> wait(std::uint64_t& seen) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return generation_ != seen; });
    seen = generation_;
    return stop_ ? nullptr : snapshot_;
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::shared_ptr<const StateBatch> snapshot_;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

struct WorkerContext {
  const ModelSpec* model;
  std::uint64_t master_seed;
  std::uint64_t num_nodes;
  StepBroadcast* broadcast;
  Transport* transport;
};

void worker_main(std::uint32_t worker, const Partition& part, const WorkerContext& ctx) {
  try {
    const detail::RowSource rows{part.row_ptr, part.src_idx, part.weights, part.owned_targets};
    const bool async = ctx.model->iteration_mode() == IterationMode::Asynchronous;
    std::vector<std::int64_t> row_of;
    if (async) {
      row_of.assign(ctx.num_nodes, -1);
      for (std::size_t r = 0; r < part.owned_targets.size(); ++r) {
        row_of[part.owned_targets[r]] = static_cast<std::int64_t>(r);
      }
    }
    std::uint64_t seen = 0;
    for (;;) {
      const auto prev = ctx.broadcast->wait(seen);
      if (!prev) return;
      const detail::KeyBase keys{ctx.master_seed, prev->sim_offset(), prev->step() + 1};
      StateBatch local(ctx.model->channels(), prev->lanes(), rows.rows(), prev->sim_offset(), keys.step);
      if (async) {
        detail::copy_rows(rows, *prev, local, 0, rows.rows());
        detail::compute_async_lanes(*ctx.model, rows, row_of, ctx.num_nodes, *prev, keys, local, 0, prev->lanes());
      } else {
        detail::compute_sync_rows(*ctx.model, rows, *prev, keys, local, 0, rows.rows());
      }
      SyncMessage msg;
      msg.step = keys.step;
      msg.part = static_cast<std::uint16_t>(part.index);
      msg.lane_lo = static_cast<std::uint32_t>(prev->sim_offset());
      msg.lane_hi = static_cast<std::uint32_t>(prev->sim_offset() + prev->lanes());
      msg.channels = std::move(local.channel_data());
      ctx.transport->send(worker, std::move(msg));
    }
  } catch (const std::exception& e) {
    ctx.transport->send_failure(worker, e.what());
  }
  // After a failure keep draining control messages until the coordinator stops.
  std::uint64_t seen = 0;
  while (ctx.broadcast->wait(seen)) {
  }
}

/// Shared driver: `provide(w)` returns worker w's shard (called on the worker's thread).
template <typename Provide>
EpochResults run_workers(std::uint32_t workers, std::uint64_t num_nodes, std::vector<std::size_t> rows_per_worker,
                         std::vector<std::vector<NodeId>> owned_by_part, const ModelSpec& model,
                         const SeedSet& seeds, std::uint64_t epochs, Steps steps, std::size_t batch_size,
                         std::uint64_t master_seed, const DistributedOptions& options, DistributedStats* stats,
                         Provide provide) {
  if (epochs == 0) fail(ErrorKind::Validation, "epochs must be >= 1");
  if (batch_size == 0) fail(ErrorKind::Validation, "batch_size must be >= 1");
  if (epochs > (std::uint64_t{1} << 32)) fail(ErrorKind::Validation, "epochs exceed the 32-bit sim index range");
  if (steps.until_converged && !model.has_fixed_point()) {
    fail(ErrorKind::Validation, std::string("model ") + std::string(model.name()) +
                                    " has no guaranteed fixed point; give an explicit step count");
  }
  model.check_num_nodes(num_nodes);
  check_seeds(model, seeds, num_nodes);
  const auto lanes_max = static_cast<std::size_t>(std::min<std::uint64_t>(batch_size, epochs));
  const auto cap = options.memory_cap_bytes ? options.memory_cap_bytes : default_memory_cap();
  // Coordinator snapshot plus merged buffer plus one block per worker.
  const auto need = pass_memory_estimate(model, num_nodes, lanes_max) * 3 / 2;
  if (need > cap) {
    fail(ErrorKind::Resource, "a batch of " + std::to_string(lanes_max) + " lanes needs " + std::to_string(need) +
                                  " bytes, above the memory cap of " + std::to_string(cap) +
                                  "; use a smaller batch_size");
  }
  const std::uint64_t limit =
      steps.until_converged ? (options.converge_step_cap ? options.converge_step_cap : 10 * num_nodes) : steps.count;

  auto transport = make_transport(options.transport, model.channels(), rows_per_worker);
  StepBroadcast broadcast;
  const WorkerContext ctx{&model, master_seed, num_nodes, &broadcast, transport.get()};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::uint32_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      std::optional<Partition> part;
      try {
        part.emplace(provide(w));
      } catch (const std::exception& e) {
        transport->send_failure(w, e.what());
        std::uint64_t seen = 0;
        while (broadcast.wait(seen)) {
        }
        return;
      }
      worker_main(w, *part, ctx);
    });
  }
  auto stop_all = [&] {
    broadcast.stop();
    for (auto& t : threads) t.join();
  };

  if (stats) *stats = {};
  try {
    ResultsAccumulator acc(model, epochs, options.keep_final_states);
    std::vector<SyncMessage> inbox(workers);
    for (std::uint64_t first = 0; first < epochs; first += batch_size) {
      const auto lanes = static_cast<std::size_t>(std::min<std::uint64_t>(batch_size, epochs - first));
      auto cur = std::make_shared<StateBatch>(init_states(model, num_nodes, seeds, lanes, first, master_seed));
      acc.begin_pass(first, lanes);
      acc.record_step(*cur);
      bool changed = true;
      for (std::uint64_t t = 0; t < limit; ++t) {
        if (steps.until_converged && detail::settled(model, *cur, t > 0, changed)) break;
        broadcast.publish(cur);
        std::uint64_t traffic = 0;
        for (std::uint32_t w = 0; w < workers; ++w) {
          inbox[w] = transport->receive(w);
          traffic += inbox[w].values();
        }
        if (stats) {
          stats->values_per_step.push_back(traffic);
          stats->total_values += traffic;
        }
        auto next = std::make_shared<StateBatch>(model.channels(), lanes, num_nodes, first, cur->step() + 1);
        merge_states(inbox, owned_by_part, *next);
        if (steps.until_converged) changed = !next->same_cells(*cur);
        cur = std::move(next);
        acc.record_step(*cur);
      }
      acc.end_pass(*cur);
    }
    stop_all();
    return acc.finish(master_seed, steps);
  } catch (...) {
    transport->shutdown();
    stop_all();
    throw;
  }
}

}  // namespace

EpochResults run_distributed_epochs(std::vector<Partition> parts, const ModelSpec& model, const SeedSet& seeds,
                                    std::uint64_t epochs, Steps steps, std::size_t batch_size,
                                    std::uint64_t master_seed, const DistributedOptions& options,
                                    DistributedStats* stats) {
  if (parts.empty()) fail(ErrorKind::Config, "no partitions given");
  const auto num_nodes = parts.front().global_num_nodes;
  check_disjoint_cover(parts, num_nodes);
  model.check_weighted(parts.front().weighted);
  std::vector<std::size_t> rows;
  std::vector<std::vector<NodeId>> owned;
  for (const auto& p : parts) {
    rows.push_back(p.owned_targets.size());
    owned.push_back(p.owned_targets);
  }
  const auto workers = static_cast<std::uint32_t>(parts.size());
  return run_workers(workers, num_nodes, std::move(rows), std::move(owned), model, seeds, epochs, steps,
                     batch_size, master_seed, options, stats, [&](std::uint32_t w) { return parts[w]; });
}

EpochResults run_distributed_epochs(const std::filesystem::path& root, std::uint32_t workers, const ModelSpec& model,
                                    const SeedSet& seeds, std::uint64_t epochs, Steps steps, std::size_t batch_size,
                                    std::uint64_t master_seed, const DistributedOptions& options,
                                    DistributedStats* stats) {
  const auto manifest = load_manifest(root);
  if (workers != manifest.num_parts) {
    fail(ErrorKind::Config, "worker count " + std::to_string(workers) + " does not match the " +
                                std::to_string(manifest.num_parts) + " partitions under " + root.string());
  }
  model.check_weighted(manifest.weighted);
  // The coordinator needs each shard's target list up front to place blocks;
  // workers still load their own shard (sub-CSR included) independently.
  std::vector<std::size_t> rows;
  std::vector<std::vector<NodeId>> owned;
  for (std::uint32_t q = 1; q <= workers; ++q) {
    auto p = load_partition(root, q);
    rows.push_back(p.owned_targets.size());
    owned.push_back(std::move(p.owned_targets));
  }
  return run_workers(workers, manifest.global_num_nodes, std::move(rows), std::move(owned), model, seeds, epochs,
                     steps, batch_size, master_seed, options, stats,
                     [&](std::uint32_t w) { return load_partition(root, w + 1); });
}

}  // namespace gprop

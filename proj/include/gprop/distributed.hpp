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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gprop/graph.hpp"
#include "gprop/models.hpp"
#include "gprop/partition.hpp"
#include "gprop/results.hpp"
#include "gprop/state.hpp"

namespace gprop {

/// Updated states of one shard's owned targets for one step. Each channel is
/// laid out [owned row x lane], matching StateBatch.
struct SyncMessage {
  std::uint32_t step = 0;
  std::uint16_t part = 0;  // 1-based shard index
  std::uint32_t lane_lo = 0;
  std::uint32_t lane_hi = 0;
  std::vector<ChannelData> channels;

  /// Number of state values carried (all channels).
  std::uint64_t values() const noexcept;
};

/// Socket frame: u32 length of the rest, u32 step, u16 part, u32 lane_lo,
/// u32 lane_hi, then each channel's values little-endian (u8 or f64).
std::vector<unsigned char> encode_frame(const SyncMessage& msg);

/// Inverse of encode_frame for a shard with `rows` owned targets. Throws
/// ErrorKind::Protocol on any size or field mismatch.
SyncMessage decode_frame(std::span<const unsigned char> frame, std::span<const ChannelDesc> channels,
                         std::size_t rows);

/// Placement merge of disjoint shard blocks into `global`, which must be
/// shaped for the model. owned_by_part[q-1] lists shard q's targets. Arrival
/// order does not matter. Overlapping or missing targets, or messages from
/// different steps, raise ErrorKind::Protocol.
void merge_states(std::span<const SyncMessage> messages,
                  std::span<const std::vector<NodeId>> owned_by_part, StateBatch& global);

enum class TransportKind { InProcess, Socket };

/// Carries SyncMessages from workers to the coordinator.
class Transport {
 public:
  virtual ~Transport() = default;
  /// Worker side.
  virtual void send(std::uint32_t worker, SyncMessage msg) = 0;
  virtual void send_failure(std::uint32_t worker, const std::string& what) = 0;
  /// Coordinator side; blocks for worker `worker`'s next message and throws
  /// ErrorKind::Protocol if that worker failed.
  virtual SyncMessage receive(std::uint32_t worker) = 0;
  /// Unblocks every pending send and receive; used when aborting a run.
  virtual void shutdown() = 0;
};

/// `rows_per_worker[w]` is the owned-target count of worker w (shard w+1).
std::unique_ptr<Transport> make_transport(TransportKind kind, std::vector<ChannelDesc> channels,
                                          std::vector<std::size_t> rows_per_worker);

struct DistributedOptions {
  TransportKind transport = TransportKind::InProcess;
  std::uint64_t memory_cap_bytes = 0;   // 0: 75% of physical memory
  std::uint64_t converge_step_cap = 0;  // 0: 10 * N
  bool keep_final_states = false;
};

/// Per-step synchronisation traffic, in state values.
struct DistributedStats {
  std::vector<std::uint64_t> values_per_step;
  std::uint64_t total_values = 0;
};

/// Runs `epochs` Monte Carlo epochs with one worker per shard stored under
/// `root`. Workers load their own shard, update only their owned targets from
/// the shared previous-step snapshot using the same RNG keys as the
/// single-process engine, and the coordinator merges their blocks each step.
/// The result equals Engine::run_epochs with the same arguments.
EpochResults run_distributed_epochs(const std::filesystem::path& root, std::uint32_t workers,
                                    const ModelSpec& model, const SeedSet& seeds, std::uint64_t epochs,
                                    Steps steps, std::size_t batch_size, std::uint64_t master_seed,
                                    const DistributedOptions& options = {}, DistributedStats* stats = nullptr);

/// Same, with shards already in memory.
EpochResults run_distributed_epochs(std::vector<Partition> parts, const ModelSpec& model,
                                    const SeedSet& seeds, std::uint64_t epochs, Steps steps,
                                    std::size_t batch_size, std::uint64_t master_seed,
                                    const DistributedOptions& options = {}, DistributedStats* stats = nullptr);

}  // namespace gprop

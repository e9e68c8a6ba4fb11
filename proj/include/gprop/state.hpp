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
#include <span>
#include <variant>
#include <vector>

#include "gprop/models.hpp"

namespace gprop {

/// Storage for one named channel. Cells are laid out node-major: the B lanes
/// of node i are contiguous at [i*B, (i+1)*B).
using ChannelData = std::variant<std::vector<std::uint8_t>, std::vector<double>>;

/// B x N node states for B concurrent Monte Carlo lanes. Lane b simulates
/// sim index `sim_offset + b`.
class StateBatch {
 public:
  StateBatch() = default;
  StateBatch(const std::vector<ChannelDesc>& channels, std::size_t lanes, std::size_t nodes,
             std::uint64_t sim_offset, std::uint32_t step);

  std::size_t lanes() const noexcept { return lanes_; }
  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t num_channels() const noexcept { return channels_.size(); }
  std::uint64_t sim_offset() const noexcept { return sim_offset_; }
  std::uint32_t step() const noexcept { return step_; }
  void set_step(std::uint32_t step) noexcept { step_ = step; }

  bool is_discrete(std::size_t c) const noexcept {
    return std::holds_alternative<std::vector<std::uint8_t>>(channels_[c]);
  }

  std::span<std::uint8_t> discrete(std::size_t c) { return std::get<0>(channels_[c]); }
  std::span<const std::uint8_t> discrete(std::size_t c) const { return std::get<0>(channels_[c]); }
  std::span<double> continuous(std::size_t c) { return std::get<1>(channels_[c]); }
  std::span<const double> continuous(std::size_t c) const { return std::get<1>(channels_[c]); }

  std::size_t index(std::size_t lane, std::size_t node) const noexcept { return node * lanes_ + lane; }

  const std::vector<ChannelData>& channel_data() const noexcept { return channels_; }
  std::vector<ChannelData>& channel_data() noexcept { return channels_; }

  /// Channel values compare bitwise; lane/step metadata is ignored.
  bool same_cells(const StateBatch& other) const;

  /// Copies out lane `lane` of every channel as a single-lane batch.
  StateBatch lane(std::size_t lane) const;

  std::size_t bytes() const noexcept;

 private:
  std::vector<ChannelData> channels_;
  std::size_t lanes_ = 0;
  std::size_t nodes_ = 0;
  std::uint64_t sim_offset_ = 0;
  std::uint32_t step_ = 0;
};

/// Decodes the model's channels into integer state labels for (lane, node).
/// HK maps opinions above 0.5 to label 1.
std::uint8_t state_label(const ModelSpec& model, const StateBatch& s, std::size_t lane,
                         std::size_t node);

/// Per-lane label counts: result[lane * num_labels + label].
std::vector<std::uint64_t> label_counts(const ModelSpec& model, const StateBatch& s);

}  // namespace gprop

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

#include "gprop/state.hpp"

#include <cstring>

namespace gprop {

StateBatch::StateBatch(const std::vector<ChannelDesc>& channels, std::size_t lanes, std::size_t nodes,
                       std::uint64_t sim_offset, std::uint32_t step)
    : lanes_(lanes), nodes_(nodes), sim_offset_(sim_offset), step_(step) {
  channels_.reserve(channels.size());
  for (const auto& c : channels) {
    if (c.kind == ChannelKind::Discrete) {
      channels_.emplace_back(std::vector<std::uint8_t>(lanes * nodes, 0));
    } else {
      channels_.emplace_back(std::vector<double>(lanes * nodes, 0.0));
    }
  }
}

bool StateBatch::same_cells(const StateBatch& other) const {
  if (lanes_ != other.lanes_ || nodes_ != other.nodes_ || channels_.size() != other.channels_.size()) {
    return false;
  }
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    if (channels_[c].index() != other.channels_[c].index()) return false;
    if (is_discrete(c)) {
      if (std::get<0>(channels_[c]) != std::get<0>(other.channels_[c])) return false;
    } else {
      const auto& a = std::get<1>(channels_[c]);
      const auto& b = std::get<1>(other.channels_[c]);
      if (a.size() != b.size() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) != 0) {
        return false;
      }
    }
  }
  return true;
}

StateBatch StateBatch::lane(std::size_t lane) const {
  StateBatch out;
  out.lanes_ = 1;
  out.nodes_ = nodes_;
  out.sim_offset_ = sim_offset_ + lane;
  out.step_ = step_;
  for (const auto& ch : channels_) {
    std::visit(
        [&](const auto& data) {
          using T = typename std::decay_t<decltype(data)>::value_type;
          std::vector<T> col(nodes_);
          for (std::size_t i = 0; i < nodes_; ++i) col[i] = data[i * lanes_ + lane];
          out.channels_.emplace_back(std::move(col));
        },
        ch);
  }
  return out;
}

std::size_t StateBatch::bytes() const noexcept {
  std::size_t total = 0;
  for (const auto& ch : channels_) {
    std::visit([&](const auto& data) { total += data.size() * sizeof(data[0]); }, ch);
  }
  return total;
}

std::uint8_t state_label(const ModelSpec& model, const StateBatch& s, std::size_t lane,
                         std::size_t node) {
  const std::size_t i = s.index(lane, node);
  switch (model.id()) {
    case ModelId::SIR: {
      const auto h = s.discrete(0)[i];
      const auto r = s.discrete(1)[i];
      return r ? 2 : (h ? 1 : 0);
    }
    case ModelId::SEIR_DT: {
      if (s.discrete(2)[i]) return 3;
      if (s.discrete(1)[i]) return 2;
      return s.discrete(0)[i] ? 1 : 0;
    }
    case ModelId::HK:
      return s.continuous(0)[i] > 0.5 ? 1 : 0;
    default:
      return s.discrete(0)[i];
  }
}

namespace {

template <typename LabelFn>
void count_into(std::vector<std::uint64_t>& counts, std::size_t labels, const StateBatch& s,
                LabelFn label) {
  const std::size_t lanes = s.lanes();
  for (std::size_t node = 0; node < s.nodes(); ++node) {
    const std::size_t base = node * lanes;
    for (std::size_t lane = 0; lane < lanes; ++lane) ++counts[lane * labels + label(base + lane)];
  }
}

}  // namespace

std::vector<std::uint64_t> label_counts(const ModelSpec& model, const StateBatch& s) {
  const std::size_t labels = model.state_labels().size();
  std::vector<std::uint64_t> counts(s.lanes() * labels, 0);
  switch (model.id()) {
    case ModelId::SIR: {
      const auto h = s.discrete(0);
      const auto r = s.discrete(1);
      count_into(counts, labels, s, [&](std::size_t i) { return r[i] ? 2 : (h[i] ? 1 : 0); });
      break;
    }
    case ModelId::SEIR_DT: {
      const auto e = s.discrete(0);
      const auto h = s.discrete(1);
      const auto r = s.discrete(2);
      count_into(counts, labels, s,
                 [&](std::size_t i) { return r[i] ? 3 : (h[i] ? 2 : (e[i] ? 1 : 0)); });
      break;
    }
    case ModelId::HK: {
      const auto x = s.continuous(0);
      count_into(counts, labels, s, [&](std::size_t i) { return x[i] > 0.5 ? 1 : 0; });
      break;
    }
    default: {
      const auto x = s.discrete(0);
      count_into(counts, labels, s, [&](std::size_t i) { return x[i]; });
      break;
    }
  }
  return counts;
}

}  // namespace gprop

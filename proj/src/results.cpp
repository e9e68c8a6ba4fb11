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

#include "gprop/results.hpp"

#include <algorithm>

#include "gprop/error.hpp"

namespace gprop {

ResultsAccumulator::ResultsAccumulator(const ModelSpec& model, std::uint64_t epochs,
                                       bool keep_final_states)
    : model_(model),
      epochs_(epochs),
      keep_states_(keep_final_states),
      labels_(model.state_labels().size()),
      final_counts_(epochs) {
  if (keep_states_) final_states_.resize(epochs);
}

void ResultsAccumulator::begin_pass(std::uint64_t first_sim, std::size_t lanes) {
  if (first_sim + lanes > epochs_) fail(ErrorKind::Contract, "pass exceeds the epoch count");
  first_sim_ = first_sim;
  lanes_ = lanes;
  pass_steps_ = 0;
}

void ResultsAccumulator::record_step(const StateBatch& state) {
  const auto counts = label_counts(model_, state);
  std::vector<std::uint64_t> sums(labels_, 0);
  for (std::size_t b = 0; b < lanes_; ++b) {
    for (std::size_t l = 0; l < labels_; ++l) sums[l] += counts[b * labels_ + l];
  }
  if (traj_sums_.size() <= pass_steps_) traj_sums_.emplace_back(labels_, 0);
  for (std::size_t l = 0; l < labels_; ++l) traj_sums_[pass_steps_][l] += sums[l];
  last_sums_ = std::move(sums);
  ++pass_steps_;
}

void ResultsAccumulator::end_pass(const StateBatch& final_state) {
  const auto counts = label_counts(model_, final_state);
  for (std::size_t b = 0; b < lanes_; ++b) {
    final_counts_[first_sim_ + b].assign(counts.begin() + static_cast<std::ptrdiff_t>(b * labels_),
                                         counts.begin() + static_cast<std::ptrdiff_t>((b + 1) * labels_));
    if (keep_states_) final_states_[first_sim_ + b] = final_state.lane(b);
  }
  tails_.push_back({pass_steps_, last_sums_});
}

EpochResults ResultsAccumulator::finish(std::uint64_t master_seed, Steps steps) {
  std::size_t length = 0;
  for (const auto& t : tails_) length = std::max(length, t.length);
  traj_sums_.resize(length, std::vector<std::uint64_t>(labels_, 0));
  for (const auto& t : tails_) {
    for (std::size_t s = t.length; s < length; ++s) {
      for (std::size_t l = 0; l < labels_; ++l) traj_sums_[s][l] += t.final_sums[l];
    }
  }
  EpochResults r{model_, master_seed, epochs_, steps, 0, {}, {}, {}, 0.0, {}};
  r.steps_executed = length == 0 ? 0 : static_cast<std::uint32_t>(length - 1);
  const double n = static_cast<double>(epochs_);
  r.mean_trajectory.reserve(length);
  for (const auto& sums : traj_sums_) {
    std::vector<double> mean(labels_);
    for (std::size_t l = 0; l < labels_; ++l) mean[l] = static_cast<double>(sums[l]) / n;
    r.mean_trajectory.push_back(std::move(mean));
  }
  std::vector<std::uint64_t> totals(labels_, 0);
  std::uint64_t spread = 0;
  for (const auto& c : final_counts_) {
    if (c.size() != labels_) fail(ErrorKind::Contract, "an epoch was never simulated");
    for (std::size_t l = 0; l < labels_; ++l) totals[l] += c[l];
    for (std::size_t l = 1; l < labels_; ++l) spread += c[l];
  }
  r.mean_final_counts.resize(labels_);
  for (std::size_t l = 0; l < labels_; ++l) r.mean_final_counts[l] = static_cast<double>(totals[l]) / n;
  r.expected_spread = static_cast<double>(spread) / n;
  r.final_counts = std::move(final_counts_);
  r.final_states = std::move(final_states_);
  return r;
}

nlohmann::ordered_json results_to_json(const EpochResults& r, const nlohmann::ordered_json& config) {
  using nlohmann::ordered_json;
  const auto& labels = r.model.state_labels();
  ordered_json j;
  j["format_version"] = kResultsFormatVersion;
  j["model"] = r.model.name();
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.model.params()) params[k] = v;
  j["params"] = params;
  j["master_seed"] = r.master_seed;
  j["epochs"] = r.epochs;
  if (r.steps.until_converged) {
    j["steps"] = "converge";
  } else {
    j["steps"] = r.steps.count;
  }
  j["steps_executed"] = r.steps_executed;
  j["labels"] = labels;
  ordered_json traj = ordered_json::object();
  for (std::size_t l = 0; l < labels.size(); ++l) {
    ordered_json series = ordered_json::array();
    for (const auto& step : r.mean_trajectory) series.push_back(step[l]);
    traj[labels[l]] = std::move(series);
  }
  j["per_state_mean_trajectory"] = std::move(traj);
  j["per_epoch_final_counts"] = r.final_counts;
  ordered_json means = ordered_json::object();
  for (std::size_t l = 0; l < labels.size(); ++l) means[labels[l]] = r.mean_final_counts[l];
  j["mean_final_counts"] = std::move(means);
  j["expected_spread"] = r.expected_spread;
  j["config"] = config;
  return j;
}

}  // namespace gprop

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
#include <string>
#include <vector>

#include <json.hpp>

#include "gprop/models.hpp"
#include "gprop/state.hpp"

namespace gprop {

/// Number of steps per epoch, or "run until the model's fixed point" (IC and
/// Threshold only) bounded by a step cap.
struct Steps {
  std::uint32_t count = 0;
  bool until_converged = false;

  static Steps fixed(std::uint32_t n) { return {n, false}; }
  static Steps converge() { return {0, true}; }
};

struct EpochResults {
  ModelSpec model;
  std::uint64_t master_seed = 0;
  std::uint64_t epochs = 0;
  Steps steps;
  /// Longest epoch in steps; shorter (converged) epochs are padded with their
  /// final state in the mean trajectory.
  std::uint32_t steps_executed = 0;
  /// mean_trajectory[t][label]: lane-averaged count at step t (t = 0 is the
  /// initial state).
  std::vector<std::vector<double>> mean_trajectory;
  /// final_counts[epoch][label], epochs ordered by sim index.
  std::vector<std::vector<std::uint64_t>> final_counts;
  std::vector<double> mean_final_counts;
  /// Mean number of nodes whose final label is above the first (susceptible /
  /// inactive) label.
  double expected_spread = 0.0;
  /// Single-lane final state per epoch; filled only when requested.
  std::vector<StateBatch> final_states;
};

/// Collects per-step label counts from batched passes. Passes may be fed in
/// any lane layout; the result depends only on the sim indices covered.
class ResultsAccumulator {
 public:
  ResultsAccumulator(const ModelSpec& model, std::uint64_t epochs, bool keep_final_states);

  void begin_pass(std::uint64_t first_sim, std::size_t lanes);
  /// Call once for the initial state and once after every step.
  void record_step(const StateBatch& state);
  void end_pass(const StateBatch& final_state);

  EpochResults finish(std::uint64_t master_seed, Steps steps);

 private:
  struct PassTail {
    std::size_t length;
    std::vector<std::uint64_t> final_sums;
  };

  ModelSpec model_;
  std::uint64_t epochs_;
  bool keep_states_;
  std::size_t labels_;
  std::uint64_t first_sim_ = 0;
  std::size_t lanes_ = 0;
  std::size_t pass_steps_ = 0;
  std::vector<std::uint64_t> last_sums_;
  std::vector<std::vector<std::uint64_t>> traj_sums_;
  std::vector<PassTail> tails_;
  std::vector<std::vector<std::uint64_t>> final_counts_;
  std::vector<StateBatch> final_states_;
};

inline constexpr int kResultsFormatVersion = 1;

/// Serialises to the results schema. `config` is embedded verbatim as the
/// resolved run configuration.
nlohmann::ordered_json results_to_json(const EpochResults& results,
                                       const nlohmann::ordered_json& config);

}  // namespace gprop

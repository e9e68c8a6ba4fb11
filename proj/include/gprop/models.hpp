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
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gprop {

class CsrGraph;

enum class ModelId : std::uint8_t {
  SI,
  SIS,
  SIR,
  SEIR_DT,
  IC,
  THRESHOLD,
  VOTER,
  MAJORITY_RULE,
  HK,
};

enum class IterationMode : std::uint8_t { Synchronous, Asynchronous };

enum class ChannelKind : std::uint8_t { Discrete, Continuous };

struct ChannelDesc {
  std::string name;
  ChannelKind kind;
};

/// Integer codes used by the three-valued cascade channel.
enum IcState : std::uint8_t { kInactive = 0, kNewlyActive = 1, kActiveSpent = 2 };

/// A validated model: identifier plus named real parameters. Construction
/// rejects unknown, missing or out-of-range parameters.
class ModelSpec {
 public:
  ModelSpec(ModelId id, std::map<std::string, double> params);

  /// Accepts the config names: si, sis, sir, seir_dt (or seir), ic,
  /// threshold, voter, majority_rule, hk.
  static ModelSpec parse(std::string_view name, std::map<std::string, double> params);

  ModelId id() const noexcept { return id_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }
  double param(const std::string& name) const;

  std::string_view name() const noexcept;
  IterationMode iteration_mode() const noexcept;
  bool supports_weights() const noexcept;
  /// Epidemic and cascade models need a non-empty seed set.
  bool requires_seeds() const noexcept;
  /// IC and Threshold reach a fixed point, so they may run "until converged".
  bool has_fixed_point() const noexcept;
  /// Initial opinions drawn per lane (HK) rather than copied from seeds.
  bool stochastic_init() const noexcept;

  const std::vector<ChannelDesc>& channels() const noexcept;
  /// Ordered state labels; the index is the integer code.
  const std::vector<std::string>& state_labels() const noexcept;

  /// Throws ErrorKind::Validation if the graph is weighted and the model does
  /// not support weights.
  void check_graph(const CsrGraph& graph) const;
  void check_weighted(bool weighted) const;
  /// Raises when a parameter depends on N (majority group size).
  void check_num_nodes(std::uint64_t num_nodes) const;

 private:
  ModelId id_;
  std::map<std::string, double> params_;
};

std::string_view model_name(ModelId id) noexcept;

/// Lower-case config name of each implemented model.
const std::vector<std::string>& model_names();

}  // namespace gprop

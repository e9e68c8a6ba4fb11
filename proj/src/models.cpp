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

#include "gprop/models.hpp"

#include <array>
#include <cmath>

#include "gprop/error.hpp"
#include "gprop/graph.hpp"

namespace gprop {

namespace {

enum class Range { Probability, PositiveInteger, Positive };

struct ParamRule {
  const char* name;
  Range range;
};

struct ModelTraits {
  ModelId id;
  const char* name;
  const char* config_name;
  IterationMode mode;
  bool weights;
  bool seeds;
  bool fixed_point;
  std::vector<ParamRule> params;
  std::vector<ChannelDesc> channels;
  std::vector<std::string> labels;
};

const std::vector<ModelTraits>& traits_table() {
  using enum ModelId;
  constexpr auto sync = IterationMode::Synchronous;
  constexpr auto async = IterationMode::Asynchronous;
  constexpr auto D = ChannelKind::Discrete;
  static const std::vector<ModelTraits> table = {
      {SI, "SI", "si", sync, true, true, false, {{"beta", Range::Probability}}, {{"h", D}}, {"S", "I"}},
      {SIS, "SIS", "sis", sync, true, true, false,
       {{"beta", Range::Probability}, {"lambda", Range::Probability}}, {{"h", D}}, {"S", "I"}},
      {SIR, "SIR", "sir", sync, true, true, false,
       {{"beta", Range::Probability}, {"lambda", Range::Probability}}, {{"h", D}, {"r", D}},
       {"S", "I", "R"}},
      {SEIR_DT, "SEIR_DT", "seir_dt", sync, true, true, false,
       {{"beta", Range::Probability}, {"lambda", Range::Probability}, {"alpha", Range::Probability}},
       {{"e", D}, {"h", D}, {"r", D}}, {"S", "E", "I", "R"}},
      {IC, "IC", "ic", sync, false, true, true, {{"p", Range::Probability}}, {{"state", D}},
       {"inactive", "newly_active", "active_spent"}},
      {THRESHOLD, "THRESHOLD", "threshold", sync, true, true, true, {{"tau", Range::Probability}},
       {{"active", D}}, {"inactive", "active"}},
      {VOTER, "VOTER", "voter", async, false, false, false, {}, {{"opinion", D}},
       {"opinion_0", "opinion_1"}},
      {MAJORITY_RULE, "MAJORITY_RULE", "majority_rule", async, false, false, false,
       {{"q", Range::PositiveInteger}}, {{"opinion", D}}, {"opinion_0", "opinion_1"}},
      {HK, "HK", "hk", sync, false, false, false, {{"epsilon", Range::Positive}},
       {{"opinion", ChannelKind::Continuous}}, {"low", "high"}},
  };
  return table;
}

const ModelTraits& traits(ModelId id) { return traits_table()[static_cast<std::size_t>(id)]; }

}  // namespace

ModelSpec::ModelSpec(ModelId id, std::map<std::string, double> params)
    : id_(id), params_(std::move(params)) {
  const auto& t = traits(id_);
  for (const auto& [name, value] : params_) {
    bool known = false;
    for (const auto& rule : t.params) known = known || name == rule.name;
    if (!known) {
      fail(ErrorKind::Validation, "unknown parameter '" + name + "' for model " + t.config_name);
    }
  }
  for (const auto& rule : t.params) {
    auto it = params_.find(rule.name);
    if (it == params_.end()) {
      fail(ErrorKind::Validation,
           std::string("missing parameter '") + rule.name + "' for model " + t.config_name);
    }
    const double v = it->second;
    bool ok = std::isfinite(v);
    switch (rule.range) {
      case Range::Probability: ok = ok && v >= 0.0 && v <= 1.0; break;
      case Range::Positive: ok = ok && v > 0.0; break;
      case Range::PositiveInteger: ok = ok && v >= 1.0 && v == std::floor(v) && v < 4.294967296e9; break;
    }
    if (!ok) {
      fail(ErrorKind::Validation, std::string("parameter '") + rule.name + "' out of range for model " +
                                      t.config_name + ": " + std::to_string(v));
    }
  }
}

ModelSpec ModelSpec::parse(std::string_view name, std::map<std::string, double> params) {
  if (name == "seir") name = "seir_dt";
  for (const auto& t : traits_table()) {
    if (name == t.config_name) return ModelSpec(t.id, std::move(params));
  }
  fail(ErrorKind::Validation, "unknown model '" + std::string(name) + "'");
}

double ModelSpec::param(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) fail(ErrorKind::Contract, "model has no parameter '" + name + "'");
  return it->second;
}

std::string_view ModelSpec::name() const noexcept { return traits(id_).config_name; }
IterationMode ModelSpec::iteration_mode() const noexcept { return traits(id_).mode; }
bool ModelSpec::supports_weights() const noexcept { return traits(id_).weights; }
bool ModelSpec::requires_seeds() const noexcept { return traits(id_).seeds; }
bool ModelSpec::has_fixed_point() const noexcept { return traits(id_).fixed_point; }
bool ModelSpec::stochastic_init() const noexcept { return id_ == ModelId::HK; }
const std::vector<ChannelDesc>& ModelSpec::channels() const noexcept { return traits(id_).channels; }
const std::vector<std::string>& ModelSpec::state_labels() const noexcept { return traits(id_).labels; }

void ModelSpec::check_weighted(bool weighted) const {
  if (weighted && !supports_weights()) {
    fail(ErrorKind::Validation, std::string("model ") + traits(id_).config_name +
                                    " does not support weighted graphs");
  }
}

void ModelSpec::check_graph(const CsrGraph& graph) const {
  check_weighted(graph.weighted());
  check_num_nodes(graph.num_nodes());
}

void ModelSpec::check_num_nodes(std::uint64_t num_nodes) const {
  if (id_ == ModelId::MAJORITY_RULE && param("q") > static_cast<double>(num_nodes)) {
    fail(ErrorKind::Validation, "majority rule group size q exceeds node count");
  }
}

std::string_view model_name(ModelId id) noexcept { return traits(id).name; }

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& t : traits_table()) out.emplace_back(t.config_name);
    return out;
  }();
  return names;
}

}  // namespace gprop

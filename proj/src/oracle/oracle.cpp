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

#include "oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "gprop/error.hpp"

namespace gprop::oracle {

namespace {

enum : std::uint8_t { S = 0, E = 1 };

struct Ctx {
  const ModelSpec& model;
  const CsrGraph& g;
  std::uint64_t seed;
  std::uint32_t sim;
  std::uint32_t t;
  Decider& d;

  RngKey key(NodeId node, DrawTag tag) const { return {seed, sim, t, node, tag}; }
  double w(std::uint64_t e) const { return g.weighted() ? g.weights()[e] : 1.0; }
};

// Probability that at least one infected in-neighbour transmits.
double exposure(const Ctx& c, NodeId v, const std::vector<std::uint8_t>& labels, std::uint8_t infected_label,
                double beta) {
  double escape = 1.0;
  const auto rp = c.g.row_ptr();
  for (auto e = rp[v]; e < rp[v + 1]; ++e) {
    if (labels[c.g.src_idx()[e]] == infected_label) escape *= std::pow(1.0 - beta, c.w(e));
  }
  return 1.0 - escape;
}

NodeStates step_epidemic(const Ctx& c, const NodeStates& prev) {
  const auto n = c.g.num_nodes();
  NodeStates next = prev;
  const double beta = c.model.param("beta");
  switch (c.model.id()) {
    case ModelId::SI:
      for (NodeId v = 0; v < n; ++v) {
        if (prev.labels[v] == 0) next.labels[v] = c.d.bernoulli(exposure(c, v, prev.labels, 1, beta), c.key(v, DrawTag::Infect));
      }
      break;
    case ModelId::SIS: {
      const double lambda = c.model.param("lambda");
      for (NodeId v = 0; v < n; ++v) {
        if (prev.labels[v] == 1) {
          next.labels[v] = c.d.bernoulli(lambda, c.key(v, DrawTag::Recover)) ? 0 : 1;
        } else {
          next.labels[v] = c.d.bernoulli(exposure(c, v, prev.labels, 1, beta), c.key(v, DrawTag::Infect));
        }
      }
      break;
    }
    case ModelId::SIR: {
      const double lambda = c.model.param("lambda");
      for (NodeId v = 0; v < n; ++v) {
        if (prev.labels[v] == 1) {
          if (c.d.bernoulli(lambda, c.key(v, DrawTag::Recover))) next.labels[v] = 2;
        } else if (prev.labels[v] == 0) {
          next.labels[v] = c.d.bernoulli(exposure(c, v, prev.labels, 1, beta), c.key(v, DrawTag::Infect));
        }
      }
      break;
    }
    default: {  // SEIR: S=0 E=1 I=2 R=3
      const double lambda = c.model.param("lambda");
      const double alpha = c.model.param("alpha");
      for (NodeId v = 0; v < n; ++v) {
        switch (prev.labels[v]) {
          case 2:
            if (c.d.bernoulli(lambda, c.key(v, DrawTag::Recover))) next.labels[v] = 3;
            break;
          case E:
            if (c.d.bernoulli(alpha, c.key(v, DrawTag::Latent))) next.labels[v] = 2;
            break;
          case S:
            if (c.d.bernoulli(exposure(c, v, prev.labels, 2, beta), c.key(v, DrawTag::Infect))) next.labels[v] = E;
            break;
          default:
            break;
        }
      }
    }
  }
  return next;
}

NodeStates step_cascade(const Ctx& c, const NodeStates& prev) {
  const auto n = c.g.num_nodes();
  const auto rp = c.g.row_ptr();
  const auto src = c.g.src_idx();
  NodeStates next = prev;
  if (c.model.id() == ModelId::IC) {
    const double p = c.model.param("p");
    for (NodeId v = 0; v < n; ++v) {
      if (prev.labels[v] != kInactive) {
        next.labels[v] = kActiveSpent;
        continue;
      }
      for (auto e = rp[v]; e < rp[v + 1]; ++e) {
        if (prev.labels[src[e]] == kNewlyActive && c.d.bernoulli(p, c.key(e, DrawTag::EdgeTrial))) {
          next.labels[v] = kNewlyActive;
          break;
        }
      }
    }
    return next;
  }
  const double tau = c.model.param("tau");
  for (NodeId v = 0; v < n; ++v) {
    if (prev.labels[v]) continue;
    double on = 0.0;
    double all = 0.0;
    for (auto e = rp[v]; e < rp[v + 1]; ++e) {
      all += c.w(e);
      if (prev.labels[src[e]]) on += c.w(e);
    }
    if (all > 0.0 && on / all >= tau) next.labels[v] = 1;
  }
  return next;
}

NodeStates step_opinion(const Ctx& c, const NodeStates& prev) {
  const auto n = c.g.num_nodes();
  const auto rp = c.g.row_ptr();
  const auto src = c.g.src_idx();
  NodeStates next = prev;
  switch (c.model.id()) {
    case ModelId::VOTER: {
      const NodeId v = c.d.pick(n, c.key(0, DrawTag::NodePick));
      const auto deg = rp[v + 1] - rp[v];
      if (deg > 0) {
        const auto k = c.d.pick(deg, c.key(v + 1, DrawTag::NodePick));
        next.labels[v] = prev.labels[src[rp[v] + k]];
      }
      break;
    }
    case ModelId::MAJORITY_RULE: {
      const auto q = static_cast<std::uint64_t>(c.model.param("q"));
      std::vector<NodeId> group;
      for (std::uint64_t a = 0; group.size() < q; ++a) {
        const NodeId m = c.d.pick(n, c.key(n + 1 + a, DrawTag::NodePick));
        bool dup = false;
        for (NodeId x : group) dup = dup || x == m;
        if (!dup) group.push_back(m);
      }
      std::uint64_t ones = 0;
      for (NodeId m : group) ones += prev.labels[m];
      std::uint8_t maj;
      if (ones * 2 == q) {
        maj = c.d.bernoulli(0.5, c.key(n, DrawTag::NodePick)) ? 1 : 0;
      } else {
        maj = ones * 2 > q ? 1 : 0;
      }
      for (NodeId m : group) next.labels[m] = maj;
      break;
    }
    default: {  // HK
      const double eps = c.model.param("epsilon");
      for (NodeId v = 0; v < n; ++v) {
        double sum = 0.0;
        std::uint64_t cnt = 0;
        for (auto e = rp[v]; e < rp[v + 1]; ++e) {
          const double xj = prev.opinions[src[e]];
          if (std::fabs(prev.opinions[v] - xj) < eps) {
            sum += xj;
            ++cnt;
          }
        }
        if (cnt) next.opinions[v] = sum / static_cast<double>(cnt);
        next.labels[v] = next.opinions[v] > 0.5 ? 1 : 0;
      }
    }
  }
  return next;
}

class EnumeratingDecider final : public Decider {
 public:
  struct Choice {
    std::uint64_t index;
    std::uint64_t arity;
  };

  void restart() {
    pos_ = 0;
    weight_ = 1.0;
  }
  double weight() const { return weight_; }

  /// Moves to the next leaf; false when the tree is exhausted.
  bool advance() {
    path_.resize(pos_);
    while (!path_.empty() && path_.back().index + 1 == path_.back().arity) path_.pop_back();
    if (path_.empty()) return false;
    ++path_.back().index;
    return true;
  }

  bool bernoulli(double p, const RngKey&) override {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    const bool yes = take(2) == 0;
    weight_ *= yes ? p : 1.0 - p;
    return yes;
  }

  std::uint64_t pick(std::uint64_t n, const RngKey&) override {
    if (n == 0) throw std::invalid_argument("pick from nothing");
    if (n == 1) return 0;
    const auto k = take(n);
    weight_ /= static_cast<double>(n);
    return k;
  }

 private:
  std::uint64_t take(std::uint64_t arity) {
    if (pos_ == path_.size()) path_.push_back({0, arity});
    if (path_[pos_].arity != arity) throw std::logic_error("non-deterministic replay");
    return path_[pos_++].index;
  }

  std::vector<Choice> path_;
  std::size_t pos_ = 0;
  double weight_ = 1.0;
};

}  // namespace

NodeStates initial_state(const ModelSpec& model, const CsrGraph& graph, const SeedSet& seeds,
                         std::uint64_t master_seed, std::uint32_t sim_index) {
  const auto n = graph.num_nodes();
  NodeStates s;
  s.labels.assign(n, 0);
  if (model.id() == ModelId::HK) {
    s.opinions.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      s.opinions[v] = uniform({master_seed, sim_index, 0, v, DrawTag::OpinionInit}) * 2.0 - 1.0;
      s.labels[v] = s.opinions[v] > 0.5 ? 1 : 0;
    }
    return s;
  }
  const std::uint8_t seeded = model.id() == ModelId::SEIR_DT ? 2 : 1;
  for (NodeId v : seeds) s.labels.at(v) = seeded;
  return s;
}

NodeStates step(const ModelSpec& model, const CsrGraph& graph, const NodeStates& prev,
                std::uint64_t master_seed, std::uint32_t sim_index, std::uint32_t t, Decider& decider) {
  const Ctx c{model, graph, master_seed, sim_index, t, decider};
  switch (model.id()) {
    case ModelId::SI:
    case ModelId::SIS:
    case ModelId::SIR:
    case ModelId::SEIR_DT:
      return step_epidemic(c, prev);
    case ModelId::IC:
    case ModelId::THRESHOLD:
      return step_cascade(c, prev);
    default:
      return step_opinion(c, prev);
  }
}

std::vector<std::vector<std::uint64_t>> keyed_trajectory(const ModelSpec& model, const CsrGraph& graph,
                                                         const SeedSet& seeds, std::uint64_t master_seed,
                                                         std::uint32_t sim_index, std::uint32_t steps,
                                                         NodeStates* final_state) {
  KeyedDecider d;
  const auto labels = model.state_labels().size();
  auto count = [&](const NodeStates& s) {
    std::vector<std::uint64_t> c(labels, 0);
    for (auto l : s.labels) ++c[l];
    return c;
  };
  NodeStates s = initial_state(model, graph, seeds, master_seed, sim_index);
  std::vector<std::vector<std::uint64_t>> out{count(s)};
  for (std::uint32_t t = 1; t <= steps; ++t) {
    s = step(model, graph, s, master_seed, sim_index, t, d);
    out.push_back(count(s));
  }
  if (final_state) *final_state = std::move(s);
  return out;
}

NodeStates naive_epoch(const ModelSpec& model, const CsrGraph& graph, const SeedSet& seeds, std::uint32_t steps,
                       std::uint32_t sim_index, std::uint64_t master_seed, bool allow_large) {
  if (!allow_large && graph.num_nodes() > kNaiveNodeLimit) {
    fail(ErrorKind::Validation, "the reference oracle is limited to " + std::to_string(kNaiveNodeLimit) + " nodes");
  }
  KeyedDecider d;
  NodeStates s = initial_state(model, graph, seeds, master_seed, sim_index);
  for (std::uint32_t t = 1; t <= steps; ++t) s = step(model, graph, s, master_seed, sim_index, t, d);
  return s;
}

double exact_expectation(const ModelSpec& model, const CsrGraph& graph, const SeedSet& seeds,
                         std::uint32_t steps, const std::function<double(const NodeStates&)>& f,
                         std::uint64_t max_leaves) {
  EnumeratingDecider d;
  const NodeStates init = initial_state(model, graph, seeds, 0, 0);
  double total = 0.0;
  std::uint64_t leaves = 0;
  do {
    if (++leaves > max_leaves) throw std::length_error("outcome tree too large to enumerate");
    d.restart();
    NodeStates s = init;
    for (std::uint32_t t = 1; t <= steps; ++t) s = step(model, graph, s, 0, 0, t, d);
    total += d.weight() * f(s);
  } while (d.advance());
  return total;
}

double spread(const NodeStates& s) {
  double n = 0.0;
  for (auto l : s.labels) n += l != 0;
  return n;
}

}  // namespace gprop::oracle

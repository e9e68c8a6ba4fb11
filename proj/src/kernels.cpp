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

#include "kernels.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "gprop/error.hpp"

namespace gprop::detail {

namespace {

// log(1 - p) with p == 1 giving -inf; a -inf sum yields infection probability 1.
double log_keep(double p) { return std::log(1.0 - p); }

// 1 - prod(1-beta)^w expressed through the log-space sum.
inline double infection_probability(double log_sum) { return 1.0 - std::exp(log_sum); }

struct EdgeCtx {
  NodeId source;
  NodeId target;
  double weight;
};

/// Shared driver: for each row, fold the kernel's message over the in-edge
/// segment in CSR order for every lane, then apply the kernel's update.
template <typename Kernel>
void run_sync(const Kernel& k, const RowSource& rows, std::size_t lanes, std::size_t row_lo,
              std::size_t row_hi) {
  using Acc = typename Kernel::Acc;
  std::vector<Acc> acc(lanes);
  const bool weighted = !rows.weights.empty();
  for (std::size_t r = row_lo; r < row_hi; ++r) {
    const NodeId i = rows.target(r);
    std::fill(acc.begin(), acc.end(), Kernel::identity());
    for (std::uint64_t e = rows.row_ptr[r]; e < rows.row_ptr[r + 1]; ++e) {
      const EdgeCtx edge{rows.src[e], i, weighted ? rows.weights[e] : 1.0};
      k.gather(acc.data(), edge);
    }
    for (std::size_t b = 0; b < lanes; ++b) k.update(b, i, r, acc[b]);
  }
}

// Infection message shared by the compartmental models: an infected source
// contributes w * log(1 - beta).
struct InfectionGather {
  const std::uint8_t* infected;
  std::size_t lanes;
  double log_keep_beta;

  void gather(double* acc, const EdgeCtx& e) const {
    const double contribution = e.weight * log_keep_beta;
    const std::uint8_t* h = infected + e.source * lanes;
    for (std::size_t b = 0; b < lanes; ++b) acc[b] += h[b] ? contribution : 0.0;
  }
};

struct SiKernel : InfectionGather {
  using Acc = double;
  KeyBase keys;
  std::uint8_t* out_h;

  static Acc identity() { return 0.0; }

  void update(std::size_t b, NodeId i, std::size_t r, Acc sum) const {
    const std::size_t pi = i * lanes + b;
    std::uint8_t h = infected[pi];
    if (!h) {
      const double m = infection_probability(sum);
      h = m > 0.0 && uniform(keys.key(b, i, DrawTag::Infect)) < m;
    }
    out_h[r * lanes + b] = h;
  }
};

struct SisKernel : InfectionGather {
  using Acc = double;
  KeyBase keys;
  double recover;
  std::uint8_t* out_h;

  static Acc identity() { return 0.0; }

  void update(std::size_t b, NodeId i, std::size_t r, Acc sum) const {
    const std::size_t pi = i * lanes + b;
    std::uint8_t h;
    if (infected[pi]) {
      h = !(recover > 0.0 && uniform(keys.key(b, i, DrawTag::Recover)) < recover);
    } else {
      const double m = infection_probability(sum);
      h = m > 0.0 && uniform(keys.key(b, i, DrawTag::Infect)) < m;
    }
    out_h[r * lanes + b] = h;
  }
};

struct SirKernel : InfectionGather {
  using Acc = double;
  KeyBase keys;
  double recover;
  const std::uint8_t* recovered;
  std::uint8_t* out_h;
  std::uint8_t* out_r;

  static Acc identity() { return 0.0; }

  void update(std::size_t b, NodeId i, std::size_t r, Acc sum) const {
    const std::size_t pi = i * lanes + b;
    const std::size_t po = r * lanes + b;
    std::uint8_t h = 0;
    std::uint8_t rec = recovered[pi];
    if (infected[pi]) {
      const bool recovers = recover > 0.0 && uniform(keys.key(b, i, DrawTag::Recover)) < recover;
      h = !recovers;
      rec = recovers;
    } else if (!rec) {
      const double m = infection_probability(sum);
      h = m > 0.0 && uniform(keys.key(b, i, DrawTag::Infect)) < m;
    }
    out_h[po] = h;
    out_r[po] = rec;
  }
};

struct SeirKernel : InfectionGather {
  using Acc = double;
  KeyBase keys;
  double recover;
  double latent_exit;
  const std::uint8_t* exposed;
  const std::uint8_t* recovered;
  std::uint8_t* out_e;
  std::uint8_t* out_h;
  std::uint8_t* out_r;

  static Acc identity() { return 0.0; }

  void update(std::size_t b, NodeId i, std::size_t r, Acc sum) const {
    const std::size_t pi = i * lanes + b;
    const std::size_t po = r * lanes + b;
    std::uint8_t e = exposed[pi];
    std::uint8_t h = infected[pi];
    std::uint8_t rec = recovered[pi];
    if (h) {
      if (recover > 0.0 && uniform(keys.key(b, i, DrawTag::Recover)) < recover) {
        h = 0;
        rec = 1;
      }
    } else if (e) {
      if (latent_exit > 0.0 && uniform(keys.key(b, i, DrawTag::Latent)) < latent_exit) {
        e = 0;
        h = 1;
      }
    } else if (!rec) {
      const double m = infection_probability(sum);
      e = m > 0.0 && uniform(keys.key(b, i, DrawTag::Infect)) < m;
    }
    out_e[po] = e;
    out_h[po] = h;
    out_r[po] = rec;
  }
};

struct IcKernel {
  using Acc = double;
  const std::uint8_t* state;
  std::size_t lanes;
  double log_keep_p;
  KeyBase keys;
  std::uint8_t* out;

  static Acc identity() { return 0.0; }

  void gather(double* acc, const EdgeCtx& e) const {
    const std::uint8_t* s = state + e.source * lanes;
    for (std::size_t b = 0; b < lanes; ++b) acc[b] += s[b] == kNewlyActive ? log_keep_p : 0.0;
  }

  void update(std::size_t b, NodeId i, std::size_t r, Acc sum) const {
    const std::uint8_t s = state[i * lanes + b];
    std::uint8_t next = kActiveSpent;
    if (s == kInactive) {
      const double m = infection_probability(sum);
      next = m > 0.0 && uniform(keys.key(b, i, DrawTag::Infect)) < m ? kNewlyActive : kInactive;
    }
    out[r * lanes + b] = next;
  }
};

struct WeightPair {
  double active;
  double total;
};

struct ThresholdKernel {
  using Acc = WeightPair;
  const std::uint8_t* active;
  std::size_t lanes;
  double tau;
  std::uint8_t* out;

  static Acc identity() { return {0.0, 0.0}; }

  void gather(Acc* acc, const EdgeCtx& e) const {
    const std::uint8_t* a = active + e.source * lanes;
    for (std::size_t b = 0; b < lanes; ++b) {
      acc[b].active += a[b] ? e.weight : 0.0;
      acc[b].total += e.weight;
    }
  }

  void update(std::size_t b, NodeId i, std::size_t r, Acc w) const {
    std::uint8_t a = active[i * lanes + b];
    if (!a && w.total > 0.0) a = w.active / w.total >= tau;
    out[r * lanes + b] = a;
  }
};

struct OpinionSum {
  double sum;
  std::uint64_t count;
};

struct HkKernel {
  using Acc = OpinionSum;
  const double* opinion;
  std::size_t lanes;
  double epsilon;
  double* out;

  static Acc identity() { return {0.0, 0}; }

  void gather(Acc* acc, const EdgeCtx& e) const {
    const double* xj = opinion + e.source * lanes;
    const double* xi = opinion + e.target * lanes;
    for (std::size_t b = 0; b < lanes; ++b) {
      const bool close = std::fabs(xi[b] - xj[b]) < epsilon;
      acc[b].sum += close ? xj[b] : 0.0;
      acc[b].count += close;
    }
  }

  void update(std::size_t b, NodeId i, std::size_t r, Acc a) const {
    const double x = opinion[i * lanes + b];
    out[r * lanes + b] = a.count > 0 ? a.sum / static_cast<double>(a.count) : x;
  }
};

}  // namespace

void compute_sync_rows(const ModelSpec& model, const RowSource& rows, const StateBatch& prev,
                       const KeyBase& keys, StateBatch& out, std::size_t row_lo, std::size_t row_hi) {
  const std::size_t lanes = prev.lanes();
  if (out.lanes() != lanes || out.num_channels() != prev.num_channels() || out.nodes() < row_hi) {
    fail(ErrorKind::Contract, "output block does not match the state batch shape");
  }
  switch (model.id()) {
    case ModelId::SI: {
      SiKernel k{{prev.discrete(0).data(), lanes, log_keep(model.param("beta"))}, keys,
                 out.discrete(0).data()};
      run_sync(k, rows, lanes, row_lo, row_hi);
      break;
    }
    case ModelId::SIS: {
      SisKernel k{{prev.discrete(0).data(), lanes, log_keep(model.param("beta"))}, keys,
                  model.param("lambda"), out.discrete(0).data()};
      run_sync(k, rows, lanes, row_lo, row_hi);
      break;
    }
    case ModelId::SIR: {
      SirKernel k{{prev.discrete(0).data(), lanes, log_keep(model.param("beta"))}, keys,
                  model.param("lambda"), prev.discrete(1).data(), out.discrete(0).data(),
                  out.discrete(1).data()};
      run_sync(k, rows, lanes, row_lo, row_hi);
      break;
    }
    case ModelId::SEIR_DT: {
      SeirKernel k{{prev.discrete(1).data(), lanes, log_keep(model.param("beta"))},
                   keys,
                   model.param("lambda"),
                   model.param("alpha"),
                   prev.discrete(0).data(),
                   prev.discrete(2).data(),
                   out.discrete(0).data(),
                   out.discrete(1).data(),
                   out.discrete(2).data()};
      run_sync(k, rows, lanes, row_lo, row_hi);
      break;
    }
    case ModelId::IC: {
      IcKernel k{prev.discrete(0).data(), lanes, log_keep(model.param("p")), keys, out.discrete(0).data()};
      run_sync(k, rows, lanes, row_lo, row_hi);
      break;
    }
    case ModelId::THRESHOLD: {
      ThresholdKernel k{prev.discrete(0).data(), lanes, model.param("tau"), out.discrete(0).data()};
      run_sync(k, rows, lanes, row_lo, row_hi);
      break;
    }
    case ModelId::HK: {
      HkKernel k{prev.continuous(0).data(), lanes, model.param("epsilon"), out.continuous(0).data()};
      run_sync(k, rows, lanes, row_lo, row_hi);
      break;
    }
    case ModelId::VOTER:
    case ModelId::MAJORITY_RULE:
      fail(ErrorKind::Contract, "asynchronous model passed to the synchronous kernel");
  }
}

void copy_rows(const RowSource& rows, const StateBatch& prev, StateBatch& out, std::size_t row_lo,
               std::size_t row_hi) {
  const std::size_t lanes = prev.lanes();
  for (std::size_t c = 0; c < prev.num_channels(); ++c) {
    auto copy = [&](auto src, auto dst) {
      for (std::size_t r = row_lo; r < row_hi; ++r) {
        const NodeId i = rows.target(r);
        std::copy_n(src.data() + i * lanes, lanes, dst.data() + r * lanes);
      }
    };
    if (prev.is_discrete(c)) {
      copy(prev.discrete(c), out.discrete(c));
    } else {
      copy(prev.continuous(c), out.continuous(c));
    }
  }
}

void compute_async_lanes(const ModelSpec& model, const RowSource& rows, RowLookup row_of,
                         std::uint64_t num_nodes, const StateBatch& prev, const KeyBase& keys,
                         StateBatch& out, std::size_t lane_lo, std::size_t lane_hi) {
  const std::size_t lanes = prev.lanes();
  const auto opinion = prev.discrete(0);
  auto out_opinion = out.discrete(0);
  auto owned_row = [&](NodeId v) -> std::int64_t { return row_of.empty() ? static_cast<std::int64_t>(v) : row_of[v]; };

  if (model.id() == ModelId::VOTER) {
    for (std::size_t b = lane_lo; b < lane_hi; ++b) {
      const NodeId v = uniform_int(keys.key(b, 0, DrawTag::NodePick), num_nodes);
      const auto r = owned_row(v);
      if (r < 0) continue;
      const auto begin = rows.row_ptr[r];
      const auto degree = rows.row_ptr[r + 1] - begin;
      if (degree == 0) continue;
      // Neighbour choice uses node_id v+1 so it never aliases the pick at node_id 0.
      const auto e = begin + uniform_int(keys.key(b, v + 1, DrawTag::NodePick), degree);
      out_opinion[static_cast<std::size_t>(r) * lanes + b] = opinion[rows.src[e] * lanes + b];
    }
    return;
  }
  if (model.id() != ModelId::MAJORITY_RULE) {
    fail(ErrorKind::Contract, "synchronous model passed to the asynchronous kernel");
  }

  const auto q = static_cast<std::uint64_t>(model.param("q"));
  std::vector<NodeId> group;
  std::unordered_set<NodeId> seen;
  const bool use_set = q > 32;
  for (std::size_t b = lane_lo; b < lane_hi; ++b) {
    group.clear();
    seen.clear();
    // Group members come from draws at node_id N+1+attempt; node_id N is the tie coin.
    for (std::uint64_t attempt = 0; group.size() < q; ++attempt) {
      const NodeId c = uniform_int(keys.key(b, num_nodes + 1 + attempt, DrawTag::NodePick), num_nodes);
      const bool dup = use_set ? !seen.insert(c).second
                               : std::find(group.begin(), group.end(), c) != group.end();
      if (!dup) group.push_back(c);
    }
    std::uint64_t ones = 0;
    for (NodeId c : group) ones += opinion[c * lanes + b];
    std::uint8_t majority;
    if (2 * ones > q) {
      majority = 1;
    } else if (2 * ones < q) {
      majority = 0;
    } else {
      majority = uniform(keys.key(b, num_nodes, DrawTag::NodePick)) < 0.5 ? 1 : 0;
    }
    for (NodeId c : group) {
      const auto r = owned_row(c);
      if (r >= 0) out_opinion[static_cast<std::size_t>(r) * lanes + b] = majority;
    }
  }
}

bool settled(const ModelSpec& model, const StateBatch& state, bool stepped, bool last_step_changed) {
  switch (model.id()) {
    case ModelId::IC: {
      const auto s = state.discrete(0);
      return std::find(s.begin(), s.end(), kNewlyActive) == s.end();
    }
    case ModelId::THRESHOLD:
      return stepped && !last_step_changed;
    default:
      return false;
  }
}

}  // namespace gprop::detail

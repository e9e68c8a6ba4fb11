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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "fixtures.hpp"
#include "gprop/engine.hpp"
#include "gprop/error.hpp"
#include "gprop/models.hpp"
#include "oracle.hpp"

using namespace gprop;
using fixtures::from_edges;

namespace {

constexpr std::size_t kLanes = 100'000;

StateBatch run_steps(const CsrGraph& g, const ModelSpec& m, const SeedSet& seeds, std::size_t lanes,
                     std::uint32_t steps, std::uint64_t seed = 1) {
  Engine e(std::make_shared<const CsrGraph>(g), m, seed);
  auto s = e.init_states(seeds, lanes, 0);
  for (std::uint32_t t = 0; t < steps; ++t) s = e.step(s);
  return s;
}

double fraction(const ModelSpec& m, const StateBatch& s, NodeId v, std::uint8_t label) {
  std::size_t hits = 0;
  for (std::size_t b = 0; b < s.lanes(); ++b) hits += state_label(m, s, b, v) == label;
  return static_cast<double>(hits) / static_cast<double>(s.lanes());
}

// Empirical frequency within three binomial standard errors of p.
void check_frequency(double observed, double p, std::size_t n) {
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
  CHECK(std::fabs(observed - p) <= 3 * se);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK(ModelSpec::parse("sir", {{"beta", 0.1}, {"lambda", 0.2}}).id() == ModelId::SIR);
  CHECK(ModelSpec::parse("seir", {{"beta", 0.1}, {"lambda", 0.2}, {"alpha", 0.3}}).id() == ModelId::SEIR_DT);
  CHECK(kind_of([] { ModelSpec::parse("sir", {{"beta", 0.1}}); }) == ErrorKind::Validation);
  CHECK(kind_of([] { ModelSpec::parse("sir", {{"beta", 0.1}, {"lambda", 0.2}, {"gamma", 0.1}}); }) ==
        ErrorKind::Validation);
  CHECK(kind_of([] { ModelSpec::parse("si", {{"beta", 1.5}}); }) == ErrorKind::Validation);
  CHECK(kind_of([] { ModelSpec::parse("hk", {{"epsilon", 0.0}}); }) == ErrorKind::Validation);
  CHECK(kind_of([] { ModelSpec::parse("majority_rule", {{"q", 2.5}}); }) == ErrorKind::Validation);
  CHECK(kind_of([] { ModelSpec::parse("sznajd", {}); }) == ErrorKind::Validation);
  CHECK(model_names().size() == 9);
}

TEST_CASE("labels and iteration modes") {
  CHECK(ModelSpec::parse("sir", {{"beta", 0}, {"lambda", 0}}).state_labels() ==
        std::vector<std::string>{"S", "I", "R"});
  CHECK(ModelSpec::parse("seir_dt", {{"beta", 0}, {"lambda", 0}, {"alpha", 0}}).state_labels() ==
        std::vector<std::string>{"S", "E", "I", "R"});
  CHECK(ModelSpec::parse("voter", {}).iteration_mode() == IterationMode::Asynchronous);
  CHECK(ModelSpec::parse("majority_rule", {{"q", 3}}).iteration_mode() == IterationMode::Asynchronous);
  CHECK(ModelSpec::parse("hk", {{"epsilon", 0.3}}).iteration_mode() == IterationMode::Synchronous);
}

TEST_CASE("weighted graphs are rejected where unsupported") {
  const auto g = fixtures::random_graph(10, 30, 1, true);
  for (const auto& m : {ModelSpec::parse("ic", {{"p", 0.5}}), ModelSpec::parse("voter", {}),
                        ModelSpec::parse("majority_rule", {{"q", 3}}), ModelSpec::parse("hk", {{"epsilon", 0.3}})}) {
    CHECK(kind_of([&] { Engine(std::make_shared<const CsrGraph>(g), m, 1); }) == ErrorKind::Validation);
  }
  for (const auto& m : {ModelSpec::parse("si", {{"beta", 0.5}}), ModelSpec::parse("threshold", {{"tau", 0.5}})}) {
    CHECK_NOTHROW(Engine(std::make_shared<const CsrGraph>(g), m, 1));
  }
}

TEST_CASE("SIR: two infected in-neighbours at beta 0.5 infect with probability 0.75") {
  const auto g = from_edges(3, {{0, 2}, {1, 2}});
  const auto m = ModelSpec::parse("sir", {{"beta", 0.5}, {"lambda", 0.0}});
  const auto s = run_steps(g, m, {0, 1}, kLanes, 1);
  check_frequency(fraction(m, s, 2, 1), 1 - 0.5 * 0.5, kLanes);
  const double exact = oracle::exact_expectation(m, g, {0, 1}, 1, [](const oracle::NodeStates& x) {
    return x.labels[2] == 1 ? 1.0 : 0.0;
  });
  CHECK(exact == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("SIR: weight 2 at beta 0.3 infects with probability 0.51") {
  const auto g = from_edges(2, {{0, 1, 2.0}}, true, true);
  const auto m = ModelSpec::parse("sir", {{"beta", 0.3}, {"lambda", 0.0}});
  const auto s = run_steps(g, m, {0}, kLanes, 1);
  check_frequency(fraction(m, s, 1, 1), 1 - 0.7 * 0.7, kLanes);
}

TEST_CASE("SIR limits") {
  const auto g = fixtures::random_graph(20, 80, 4);
  const auto none = ModelSpec::parse("sir", {{"beta", 0.0}, {"lambda", 0.3}});
  Engine e(std::make_shared<const CsrGraph>(g), none, 3);
  auto s = e.init_states({0, 5}, 16, 0);
  std::vector<std::uint64_t> prev_infected(16, 2);
  for (int t = 0; t < 10; ++t) {
    s = e.step(s);
    const auto c = label_counts(none, s);
    for (std::size_t b = 0; b < 16; ++b) {
      CHECK(c[b * 3 + 0] == 18);  // no new infections
      CHECK(c[b * 3 + 1] <= prev_infected[b]);
      prev_infected[b] = c[b * 3 + 1];
    }
  }
  const auto instant = ModelSpec::parse("sir", {{"beta", 0.2}, {"lambda", 1.0}});
  const auto after = run_steps(g, instant, {0, 5}, 8, 1);
  for (std::size_t b = 0; b < 8; ++b) {
    CHECK(state_label(instant, after, b, 0) == 2);
    CHECK(state_label(instant, after, b, 5) == 2);
  }
  // beta = 1 gives log(0); the infection probability must be exactly 1.
  const auto certain = ModelSpec::parse("sir", {{"beta", 1.0}, {"lambda", 0.0}});
  const auto path = from_edges(3, {{0, 1}, {1, 2}});
  const auto st = run_steps(path, certain, {0}, 1000, 2);
  CHECK(fraction(certain, st, 2, 1) == 1.0);
}

TEST_CASE("SI: path 0-1-2 at beta 0.5 reaches node 2 with probability 0.25") {
  const auto g = from_edges(3, {{0, 1}, {1, 2}});
  const auto m = ModelSpec::parse("si", {{"beta", 0.5}});
  const double exact =
      oracle::exact_expectation(m, g, {0}, 2, [](const oracle::NodeStates& x) { return x.labels[2] ? 1.0 : 0.0; });
  CHECK(exact == doctest::Approx(0.25).epsilon(1e-12));
  const auto s = run_steps(g, m, {0}, kLanes, 2);
  check_frequency(fraction(m, s, 2, 1), 0.25, kLanes);
}

TEST_CASE("SI: beta 1 infects a connected graph within its diameter") {
  // Undirected cycle of 10 nodes has diameter 5.
  std::vector<Edge> edges;
  for (NodeId i = 0; i < 10; ++i) edges.push_back({i, (i + 1) % 10});
  const auto g = from_edges(10, edges, false);
  const auto m = ModelSpec::parse("si", {{"beta", 1.0}});
  const auto s = run_steps(g, m, {0}, 4, 5);
  const auto c = label_counts(m, s);
  for (std::size_t b = 0; b < 4; ++b) CHECK(c[b * 2 + 1] == 10);
}

TEST_CASE("SIS") {
  const auto g = fixtures::random_graph(12, 40, 8);
  const auto reset = ModelSpec::parse("sis", {{"beta", 0.0}, {"lambda", 1.0}});
  const auto s = run_steps(g, reset, {1, 2, 3}, 10, 1);
  for (std::size_t b = 0; b < 10; ++b) CHECK(label_counts(reset, s)[b * 2 + 1] == 0);

  // An isolated seed stays infected for k steps with probability (1 - lambda)^k.
  const auto lone = from_edges(2, {{1, 1}});
  const auto m = ModelSpec::parse("sis", {{"beta", 0.7}, {"lambda", 0.2}});
  const auto after = run_steps(lone, m, {0}, kLanes, 3);
  check_frequency(fraction(m, after, 0, 1), std::pow(0.8, 3), kLanes);
}

TEST_CASE("SEIR latency") {
  const auto path = from_edges(3, {{0, 1}, {1, 2}});
  const auto delay = ModelSpec::parse("seir_dt", {{"beta", 1.0}, {"lambda", 0.0}, {"alpha", 1.0}});
  Engine e(std::make_shared<const CsrGraph>(path), delay, 5);
  auto s = e.init_states({0}, 3, 0);
  CHECK(state_label(delay, s, 0, 0) == 2);  // seeds start infectious
  s = e.step(s);
  for (std::size_t b = 0; b < 3; ++b) CHECK(state_label(delay, s, b, 1) == 1);
  s = e.step(s);
  for (std::size_t b = 0; b < 3; ++b) {
    CHECK(state_label(delay, s, b, 1) == 2);
    CHECK(state_label(delay, s, b, 2) == 0);  // exposed nodes do not transmit
  }
  s = e.step(s);
  for (std::size_t b = 0; b < 3; ++b) CHECK(state_label(delay, s, b, 2) == 1);

  const auto stuck = ModelSpec::parse("seir_dt", {{"beta", 1.0}, {"lambda", 0.5}, {"alpha", 0.0}});
  const auto g = fixtures::random_graph(15, 60, 2);
  const auto t = run_steps(g, stuck, {0, 1}, 50, 20);
  const auto c = label_counts(stuck, t);
  for (std::size_t b = 0; b < 50; ++b) CHECK(c[b * 4 + 2] + c[b * 4 + 3] <= 2);
}

TEST_CASE("IC: triangle from one seed at p 0.5 activates 2.25 nodes on average") {
  const auto g = fixtures::triangle();
  const auto m = ModelSpec::parse("ic", {{"p", 0.5}});
  const double exact = oracle::exact_expectation(m, g, {0}, 3, oracle::spread);
  CHECK(exact == doctest::Approx(2.25).epsilon(1e-12));
  Engine e(std::make_shared<const CsrGraph>(g), m, 11);
  const auto r = e.run_epochs({0}, 20'000, Steps::converge(), 1000);
  // Variance of the spread: values 1, 2, 3 with probabilities 0.25, 0.25, 0.5.
  const double var = 0.25 * 1 + 0.25 * 4 + 0.5 * 9 - 2.25 * 2.25;
  CHECK(std::fabs(r.expected_spread - 2.25) <= 3 * std::sqrt(var / 20'000));
}

TEST_CASE("IC limits and fixed point") {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < 12; ++i) edges.push_back({i, i + 1});
  const auto g = from_edges(12, edges, false);
  const auto full = ModelSpec::parse("ic", {{"p", 1.0}});
  Engine e(std::make_shared<const CsrGraph>(g), full, 1);
  CHECK(e.run_epochs({0}, 3, Steps::converge(), 3).expected_spread == 12.0);
  const auto none = ModelSpec::parse("ic", {{"p", 0.0}});
  Engine z(std::make_shared<const CsrGraph>(g), none, 1);
  CHECK(z.run_epochs({0, 4}, 3, Steps::converge(), 3).expected_spread == 2.0);
  // Once no node is newly active, further steps change nothing.
  auto s = run_steps(g, full, {0}, 2, 30);
  const auto again = run_steps(g, full, {0}, 2, 31);
  CHECK(s.same_cells(again));
}

TEST_CASE("Threshold boundary") {
  const auto g = from_edges(3, {{0, 2}, {1, 2}});
  const auto half = ModelSpec::parse("threshold", {{"tau", 0.5}});
  CHECK(state_label(half, run_steps(g, half, {0}, 1, 1), 0, 2) == 1);
  const auto zero = ModelSpec::parse("threshold", {{"tau", 0.0}});
  const auto z = run_steps(fixtures::from_edges(4, {{0, 1}, {1, 2}}), zero, {0}, 1, 1);
  CHECK(state_label(zero, z, 0, 1) == 1);
  CHECK(state_label(zero, z, 0, 2) == 1);
  CHECK(state_label(zero, z, 0, 3) == 0);  // no in-edges
  // Weighted: active weight 1 of 3 misses tau 0.5.
  const auto w = from_edges(3, {{0, 2, 1.0}, {1, 2, 2.0}}, true, true);
  CHECK(state_label(half, run_steps(w, half, {0}, 1, 1), 0, 2) == 0);
  CHECK(state_label(half, run_steps(w, half, {1}, 1, 1), 0, 2) == 1);
}

TEST_CASE("Threshold and HK do not depend on the master seed") {
  const auto g = fixtures::random_graph(25, 90, 6);
  const auto th = ModelSpec::parse("threshold", {{"tau", 0.3}});
  CHECK(run_steps(g, th, {0, 1, 2}, 3, 6, 1).same_cells(run_steps(g, th, {0, 1, 2}, 3, 6, 999)));
  const auto hk = ModelSpec::parse("hk", {{"epsilon", 0.4}});
  Engine e(std::make_shared<const CsrGraph>(g), hk, 1);
  const auto init = e.init_states({}, 2, 0);
  Engine other(std::make_shared<const CsrGraph>(g), hk, 777);
  CHECK(e.step(init).same_cells(other.step(init)));
}

TEST_CASE("Voter: two-node graph reaches consensus after one step") {
  const auto g = from_edges(2, {{0, 1}, {1, 0}});
  const auto m = ModelSpec::parse("voter", {});
  const double p_ones =
      oracle::exact_expectation(m, g, {0}, 1, [](const oracle::NodeStates& x) { return x.labels[0] && x.labels[1]; });
  const double p_consensus =
      oracle::exact_expectation(m, g, {0}, 1, [](const oracle::NodeStates& x) { return x.labels[0] == x.labels[1]; });
  CHECK(p_ones == doctest::Approx(0.5));
  CHECK(p_consensus == doctest::Approx(1.0));
  const auto s = run_steps(g, m, {0}, kLanes, 1);
  std::size_t ones = 0;
  for (std::size_t b = 0; b < kLanes; ++b) {
    CHECK(state_label(m, s, b, 0) == state_label(m, s, b, 1));
    ones += state_label(m, s, b, 0);
  }
  check_frequency(static_cast<double>(ones) / kLanes, 0.5, kLanes);
}

TEST_CASE("Voter: consensus is absorbing and at most one node changes per step") {
  const auto g = fixtures::random_graph(20, 60, 9);
  const auto m = ModelSpec::parse("voter", {});
  Engine e(std::make_shared<const CsrGraph>(g), m, 4);
  std::vector<NodeId> all(20);
  for (NodeId i = 0; i < 20; ++i) all[i] = i;
  auto s = e.init_states(all, 4, 0);
  for (int t = 0; t < 20; ++t) {
    s = e.step(s);
    for (std::size_t b = 0; b < 4; ++b) CHECK(label_counts(m, s)[b * 2 + 1] == 20);
  }
  auto x = e.init_states({0, 3, 7}, 64, 0);
  for (int t = 0; t < 30; ++t) {
    const auto y = e.step(x);
    for (std::size_t b = 0; b < 64; ++b) {
      int diff = 0;
      for (NodeId v = 0; v < 20; ++v) diff += state_label(m, x, b, v) != state_label(m, y, b, v);
      CHECK(diff <= 1);
    }
    x = y;
  }
}

TEST_CASE("Majority rule") {
  const auto g = fixtures::random_graph(10, 30, 3);
  const auto single = ModelSpec::parse("majority_rule", {{"q", 1}});
  const auto s0 = run_steps(g, single, {2, 4}, 8, 0);
  CHECK(run_steps(g, single, {2, 4}, 8, 25).same_cells(s0));
  const auto big = ModelSpec::parse("majority_rule", {{"q", 11}});
  CHECK(kind_of([&] { Engine(std::make_shared<const CsrGraph>(g), big, 1); }) == ErrorKind::Validation);
  // All-zero opinions stay zero.
  const auto q3 = ModelSpec::parse("majority_rule", {{"q", 3}});
  const auto z = run_steps(g, q3, {}, 8, 20);
  for (std::size_t b = 0; b < 8; ++b) CHECK(label_counts(q3, z)[b * 2 + 1] == 0);
  // q = N: everyone adopts the global majority in one step.
  const auto all = ModelSpec::parse("majority_rule", {{"q", 10}});
  const auto maj = run_steps(g, all, {0, 1, 2, 3, 4, 5, 6}, 4, 1);
  for (std::size_t b = 0; b < 4; ++b) CHECK(label_counts(all, maj)[b * 2 + 1] == 10);
}

TEST_CASE("Majority rule tie coin is fair") {
  const auto g = from_edges(2, {{0, 1}});
  const auto m = ModelSpec::parse("majority_rule", {{"q", 2}});
  const auto s = run_steps(g, m, {0}, kLanes, 1);
  check_frequency(fraction(m, s, 0, 1), 0.5, kLanes);
  for (std::size_t b = 0; b < 100; ++b) CHECK(state_label(m, s, b, 0) == state_label(m, s, b, 1));
}

TEST_CASE("HK: mutually linked pair") {
  const auto m = ModelSpec::parse("hk", {{"epsilon", 0.32}});
  auto start = [&](const CsrGraph&) {
    StateBatch s(m.channels(), 1, 2, 0, 0);
    s.continuous(0)[0] = -0.1;
    s.continuous(0)[1] = 0.1;
    return s;
  };
  // Self excluded: each node averages only its neighbour, so they swap.
  const auto pair = from_edges(2, {{0, 1}, {1, 0}});
  Engine e(std::make_shared<const CsrGraph>(pair), m, 1);
  const auto swapped = e.step(start(pair));
  CHECK(swapped.continuous(0)[0] == 0.1);
  CHECK(swapped.continuous(0)[1] == -0.1);
  // With explicit self-loops both meet at 0.
  const auto looped = from_edges(2, {{0, 1}, {1, 0}, {0, 0}, {1, 1}});
  Engine f(std::make_shared<const CsrGraph>(looped), m, 1);
  const auto met = f.step(start(looped));
  CHECK(met.continuous(0)[0] == 0.0);
  CHECK(met.continuous(0)[1] == 0.0);
  // Strict bound: a gap of exactly epsilon does not count.
  const auto edge = ModelSpec::parse("hk", {{"epsilon", 0.5}});
  StateBatch s(edge.channels(), 1, 2, 0, 0);
  s.continuous(0)[0] = 0.0;
  s.continuous(0)[1] = 0.5;
  Engine h(std::make_shared<const CsrGraph>(pair), edge, 1);
  const auto kept = h.step(s);
  CHECK(kept.continuous(0)[0] == 0.0);
  CHECK(kept.continuous(0)[1] == 0.5);
}

TEST_CASE("HK: equal opinions are a fixed point; extremes contract") {
  const auto g = fixtures::random_graph(30, 150, 12);
  const auto m = ModelSpec::parse("hk", {{"epsilon", 0.5}});
  Engine e(std::make_shared<const CsrGraph>(g), m, 3);
  StateBatch flat(m.channels(), 2, 30, 0, 0);
  for (auto& x : flat.continuous(0)) x = 0.25;
  CHECK(e.step(flat).same_cells(flat));
  auto s = e.init_states({}, 8, 0);
  for (int t = 0; t < 15; ++t) {
    const auto n = e.step(s);
    for (std::size_t b = 0; b < 8; ++b) {
      double lo0 = 2, hi0 = -2, lo1 = 2, hi1 = -2;
      for (NodeId v = 0; v < 30; ++v) {
        lo0 = std::min(lo0, s.continuous(0)[s.index(b, v)]);
        hi0 = std::max(hi0, s.continuous(0)[s.index(b, v)]);
        lo1 = std::min(lo1, n.continuous(0)[n.index(b, v)]);
        hi1 = std::max(hi1, n.continuous(0)[n.index(b, v)]);
      }
      CHECK(lo1 >= lo0);
      CHECK(hi1 <= hi0);
    }
    s = n;
  }
}

// Copyright 2026 The smoothdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "smoothdyn/errors.hpp"
#include "smoothdyn/graph.hpp"
#include "smoothdyn/stats.hpp"

using namespace smoothdyn;
using smoothdyn::testing::complete_graph;
using smoothdyn::testing::graph_of;

TEST_SUITE("graph") {

TEST_CASE("node pairs are canonical") {
  const NodePair a(3, 1);
  CHECK(a.u() == 1);
  CHECK(a.v() == 3);
  CHECK(a == NodePair(1, 3));
  CHECK(a.other(1) == 3);
  CHECK_THROWS_AS(NodePair(2, 2), ParameterError);
}

TEST_CASE("construction") {
  SUBCASE("empty") {
    const DynamicGraph g(4);
    CHECK(g.edge_count() == 0);
    for (NodeId v = 0; v < 4; ++v) CHECK(g.degree(v) == 0);
  }
  SUBCASE("K4") {
    const DynamicGraph g = complete_graph(4);
    CHECK(g.edge_count() == 6);
    for (NodeId v = 0; v < 4; ++v) CHECK(g.degree(v) == 3);
  }
  SUBCASE("path") {
    const DynamicGraph g = graph_of(3, {{0, 1}, {1, 2}});
    CHECK(g.degree(0) == 1);
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(2) == 1);
  }
  SUBCASE("duplicates and out-of-range indices are rejected") {
    CHECK_THROWS_AS(graph_of(3, {{0, 1}, {1, 0}}), ParameterError);
    CHECK_THROWS_AS(graph_of(3, {{0, 3}}), ParameterError);
  }
}

TEST_CASE("flip") {
  DynamicGraph g(4);
  CHECK(g.flip({0, 1}));
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.flip({0, 1}));
  CHECK(g == DynamicGraph(4));

  DynamicGraph k4 = complete_graph(4);
  k4.flip({2, 3});
  CHECK(k4.edge_count() == 5);
}

TEST_CASE("add and remove") {
  DynamicGraph g = graph_of(4, {{0, 1}});
  const DynamicGraph original = g;
  CHECK_FALSE(g.add({0, 1}));
  CHECK(g == original);
  CHECK_FALSE(g.remove({2, 3}));
  CHECK(g == original);
  CHECK(g.add({1, 2}));
  CHECK(g.remove({1, 2}));
  CHECK(g == original);
}

TEST_CASE("degrees stay consistent under random operations") {
  Rng rng(7);
  const NodeId n = 15;
  DynamicGraph g(n);
  for (int op = 0; op < 5000; ++op) {
    const NodePair e = pair_from_index(rng.bounded(pair_count(n)));
    switch (rng.bounded(3)) {
      case 0: g.flip(e); break;
      case 1: g.add(e); break;
      default: g.remove(e); break;
    }
    if (op % 50 != 0) continue;
    std::vector<std::size_t> degree(n, 0);
    const auto edges = g.edges();
    for (const NodePair& f : edges) {
      ++degree[f.u()];
      ++degree[f.v()];
    }
    REQUIRE(edges.size() == g.edge_count());
    for (NodeId v = 0; v < n; ++v) REQUIRE(degree[v] == g.degree(v));
  }
}

TEST_CASE("flip is an involution") {
  Rng rng(11);
  DynamicGraph g = random_graph(12, rng);
  const DynamicGraph before = g;
  for (int i = 0; i < 200; ++i) {
    const NodePair e = pair_from_index(rng.bounded(pair_count(12)));
    g.flip(e);
    g.flip(e);
    REQUIRE(g == before);
  }
}

TEST_CASE("pair indexing round-trips") {
  CHECK(pair_from_index(0) == NodePair(0, 1));
  CHECK(pair_from_index(1) == NodePair(0, 2));
  CHECK(pair_from_index(2) == NodePair(1, 2));
  CHECK(pair_from_index(3) == NodePair(0, 3));
  for (std::uint64_t k = 0; k < pair_count(300); ++k) {
    REQUIRE(index_of_pair(pair_from_index(k)) == k);
  }
  CHECK(index_of_pair(pair_from_index(4'000'000'000ULL)) == 4'000'000'000ULL);
}

TEST_CASE("random graph edge count follows Binomial(6, 1/2) on four nodes") {
  // Oracle: binomial probabilities from the closed form.
  const std::vector<double> probs = {1 / 64.0, 6 / 64.0, 15 / 64.0, 20 / 64.0,
                                     15 / 64.0, 6 / 64.0, 1 / 64.0};
  Rng rng(13);
  std::vector<std::uint64_t> counts(7, 0);
  std::vector<std::uint64_t> per_pair(6, 0);
  for (int draw = 0; draw < 10000; ++draw) {
    const DynamicGraph g = random_graph(4, rng);
    ++counts[g.edge_count()];
    for (std::uint64_t k = 0; k < 6; ++k) per_pair[k] += g.has_edge(pair_from_index(k));
  }
  CHECK(chi2_goodness_of_fit(counts, probs).passes(1e-3));
  for (auto c : per_pair) CHECK(c == doctest::Approx(5000).epsilon(0.04));
}

TEST_CASE("random graph respects restrictions") {
  Rng rng(17);
  SUBCASE("empty restriction") {
    const EdgeUniverse none = EdgeUniverse::restricted(5, {});
    for (int i = 0; i < 100; ++i) CHECK(random_graph(none, rng).edge_count() == 0);
  }
  SUBCASE("single pair") {
    const std::vector<NodePair> only = {NodePair(0, 1)};
    const EdgeUniverse universe = EdgeUniverse::restricted(5, only);
    int present = 0;
    for (int i = 0; i < 10000; ++i) {
      const DynamicGraph g = random_graph(universe, rng);
      REQUIRE(g.edge_count() <= 1);
      present += g.has_edge(0, 1);
    }
    CHECK(present / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
  }
  SUBCASE("never outside") {
    std::vector<NodePair> allowed;
    for (NodeId v = 1; v < 9; ++v) allowed.emplace_back(0, v);
    const EdgeUniverse universe = EdgeUniverse::restricted(9, allowed);
    for (int i = 0; i < 1000; ++i) {
      for (const NodePair& e : random_graph(universe, rng).edges()) REQUIRE(e.u() == 0);
    }
  }
}

TEST_CASE("edge list round trip") {
  Rng rng(19);
  const DynamicGraph g = random_graph(10, rng);
  std::stringstream text;
  write_edge_list(text, g);
  CHECK(read_edge_list(text) == g);

  std::istringstream bad("3 2\n0 1\n");
  CHECK_THROWS_AS(read_edge_list(bad), FormatError);
  std::istringstream loop("3 1\n1 1\n");
  CHECK_THROWS_AS(read_edge_list(loop), Error);
}

}  // TEST_SUITE

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

#ifndef SMOOTHDYN_TESTS_HELPERS_HPP_
#define SMOOTHDYN_TESTS_HELPERS_HPP_

#include <initializer_list>
#include <utility>
#include <vector>

#include "smoothdyn/graph.hpp"

namespace smoothdyn::testing {

inline DynamicGraph graph_of(NodeId n,
                             std::initializer_list<std::pair<NodeId, NodeId>> edges) {
  std::vector<NodePair> pairs;
  for (auto [a, b] : edges) pairs.emplace_back(a, b);
  return DynamicGraph(n, pairs);
}

inline DynamicGraph complete_graph(NodeId n) {
  DynamicGraph g(n);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) g.add({a, b});
  }
  return g;
}

/// Adjacency matrix copy, for oracles that should not share code with the
/// library's graph traversal.
inline std::vector<std::vector<int>> matrix_of(const DynamicGraph& g) {
  const NodeId n = g.node_count();
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (const NodePair& e : g.edges()) {
    a[e.u()][e.v()] = 1;
    a[e.v()][e.u()] = 1;
  }
  return a;
}

}  // namespace smoothdyn::testing

#endif  // SMOOTHDYN_TESTS_HELPERS_HPP_

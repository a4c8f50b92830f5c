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

#ifndef SMOOTHDYN_ORACLES_HPP_
#define SMOOTHDYN_ORACLES_HPP_

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "smoothdyn/graph.hpp"

namespace smoothdyn {

/// Path and cycle enumeration refuses graphs above this size.
inline constexpr NodeId kOracleNodeCap = 64;

/// Simple s-t paths with exactly k edges, k in {2,3,4}. Exhaustive DFS.
std::uint64_t bf_st_paths(const DynamicGraph& g, NodeId s, NodeId t, int k);

/// Simple k-cycles through s, k in {3,4}, each cycle counted once.
std::uint64_t bf_s_cycles(const DynamicGraph& g, NodeId s, int k);

/// BFS from node 0 reaches every node. Graphs with at most one node are
/// connected.
bool bf_connected(const DynamicGraph& g);

/// Side label (0 or 1) per node.
struct Sides {
  std::vector<std::uint8_t> label;

  /// Nodes [0, left) on side 0, [left, n) on side 1.
  static Sides split(NodeId n, NodeId left);
  NodeId count(std::uint8_t side) const;
};

struct MatchingResult {
  std::uint64_t size = 0;
  bool perfect = false;
};

/// Maximum matching by augmenting paths. Throws ParameterError on an edge
/// inside one side.
MatchingResult bf_bipartite_matching(const DynamicGraph& g, const Sides& sides);

/// Smallest vertex cover by exhaustive search; n <= 24.
std::uint64_t bf_min_vertex_cover(const DynamicGraph& g);

struct OracleReport {
  std::string problem;
  std::int64_t value = 0;
  std::int64_t elapsed_ns = 0;
};

template <class F>
OracleReport timed_oracle(std::string problem, F&& oracle) {
  const auto start = std::chrono::steady_clock::now();
  const auto value = static_cast<std::int64_t>(oracle());
  const auto stop = std::chrono::steady_clock::now();
  return {std::move(problem), value,
          std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start)
              .count()};
}

// --- Fast exact structures for Monte-Carlo runs -----------------------------

/// Bit-matrix adjacency; connectivity in O(n^2 / 64).
class DenseAdjacency {
 public:
  explicit DenseAdjacency(const DynamicGraph& g);
  void set(NodePair e, bool present);
  bool connected() const;

 private:
  std::size_t words_;
  NodeId n_;
  std::vector<std::uint64_t> bits_;
};

/// Maximum bipartite matching kept exact under single-edge changes. Left
/// nodes are [0, left), right nodes [left, left + right). After each change
/// at most one augmenting search runs: a single flip moves the optimum by at
/// most one.
class IncrementalMatching {
 public:
  IncrementalMatching(const DynamicGraph& g, NodeId left, NodeId right);
  void set(NodePair e, bool present);
  std::uint64_t size() const { return size_; }
  bool perfect() const { return left_ == right_ && size_ == left_; }

 private:
  bool augment();
  bool has(NodeId i, NodeId j) const {
    return (adj_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }

  NodeId left_;
  NodeId right_;
  std::size_t words_;
  std::vector<std::uint64_t> adj_;
  std::vector<std::int64_t> match_left_;
  std::vector<std::int64_t> match_right_;
  std::uint64_t size_ = 0;
};

}  // namespace smoothdyn

#endif  // SMOOTHDYN_ORACLES_HPP_

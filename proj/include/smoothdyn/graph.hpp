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

#ifndef SMOOTHDYN_GRAPH_HPP_
#define SMOOTHDYN_GRAPH_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <unordered_set>
#include <vector>

#include "smoothdyn/rng.hpp"

namespace smoothdyn {

using NodeId = std::uint32_t;

/// Unordered pair of distinct nodes, stored as (min, max).
class NodePair {
 public:
  NodePair(NodeId a, NodeId b);

  NodeId u() const { return u_; }
  NodeId v() const { return v_; }
  bool touches(NodeId x) const { return u_ == x || v_ == x; }
  /// The endpoint that is not `x`. `x` must be an endpoint.
  NodeId other(NodeId x) const { return x == u_ ? v_ : u_; }
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(u_) << 32) | v_;
  }

  friend auto operator<=>(const NodePair&, const NodePair&) = default;

 private:
  NodeId u_;
  NodeId v_;
};

struct NodePairHash {
  std::size_t operator()(const NodePair& e) const {
    return static_cast<std::size_t>(Rng::mix64(e.key()));
  }
};

using NeighborSet = std::unordered_set<NodeId>;

/// Simple undirected graph on nodes [0, n) supporting edge flips.
///
/// Adjacency is one hash set per node: membership and degree are expected
/// O(1), neighbor iteration is O(degree).
class DynamicGraph {
 public:
  explicit DynamicGraph(NodeId n = 0);
  /// Throws ParameterError on an out-of-range index or a duplicate pair.
  DynamicGraph(NodeId n, std::span<const NodePair> edges);

  NodeId node_count() const { return static_cast<NodeId>(adjacency_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  bool valid(NodePair e) const { return e.v() < node_count(); }
  bool has_edge(NodePair e) const;
  /// False for a == b.
  bool has_edge(NodeId a, NodeId b) const;
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  const NeighborSet& neighbors(NodeId v) const { return adjacency_[v]; }

  /// Toggles `e`; returns whether it is present afterwards.
  bool flip(NodePair e);
  /// No-op returning false when already present.
  bool add(NodePair e);
  /// No-op returning false when absent.
  bool remove(NodePair e);

  /// All edges in ascending order.
  std::vector<NodePair> edges() const;

  friend bool operator==(const DynamicGraph& a, const DynamicGraph& b);

 private:
  void check(NodePair e) const;

  std::vector<NeighborSet> adjacency_;
  std::size_t edge_count_ = 0;
};

/// The set of node pairs a process may touch: either all of binom([n],2) or
/// an explicit restriction R_H. Sampling is O(1) in both cases.
class EdgeUniverse {
 public:
  /// Every pair of distinct nodes.
  static EdgeUniverse complete(NodeId n);
  /// Only `allowed` (deduplicated, must be valid for n).
  static EdgeUniverse restricted(NodeId n, std::span<const NodePair> allowed);

  NodeId node_count() const { return n_; }
  bool is_restricted() const { return restricted_; }
  std::uint64_t size() const;
  NodePair at(std::uint64_t index) const;
  bool contains(NodePair e) const;
  NodePair sample(Rng& rng) const { return at(rng.bounded(size())); }

 private:
  NodeId n_ = 0;
  bool restricted_ = false;
  std::vector<NodePair> allowed_;
  std::unordered_set<NodePair, NodePairHash> lookup_;
};

/// Number of pairs in binom([n], 2).
constexpr std::uint64_t pair_count(std::uint64_t n) { return n * (n - 1) / 2; }

/// Pair with index k in the order (0,1), (0,2), (1,2), (0,3), ...
NodePair pair_from_index(std::uint64_t k);
std::uint64_t index_of_pair(NodePair e);

/// Each allowed pair present independently with probability 1/2.
DynamicGraph random_graph(const EdgeUniverse& universe, Rng& rng);
DynamicGraph random_graph(NodeId n, Rng& rng);

/// Edge-list text format: "n m" then m lines "u v", LF-terminated.
void write_edge_list(std::ostream& out, const DynamicGraph& g);
DynamicGraph read_edge_list(std::istream& in);

}  // namespace smoothdyn

#endif  // SMOOTHDYN_GRAPH_HPP_

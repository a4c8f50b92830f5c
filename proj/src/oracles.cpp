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

#include "smoothdyn/oracles.hpp"

#include <algorithm>
#include <bit>
#include <queue>

#include "smoothdyn/errors.hpp"

namespace smoothdyn {
namespace {

void require_cap(const DynamicGraph& g) {
  if (g.node_count() > kOracleNodeCap) {
    throw ParameterError("brute-force oracle limited to n <= " +
                         std::to_string(kOracleNodeCap));
  }
}

std::uint64_t count_paths(const DynamicGraph& g, NodeId at, NodeId t,
                          int remaining, std::vector<bool>& used) {
  if (remaining == 0) return at == t ? 1 : 0;
  std::uint64_t total = 0;
  for (NodeId next : g.neighbors(at)) {
    if (used[next]) continue;
    if (next == t && remaining != 1) continue;
    used[next] = true;
    total += count_paths(g, next, t, remaining - 1, used);
    used[next] = false;
  }
  return total;
}

/// Closed walks s, x1, ..., x_{k-1}, s with distinct nodes. Each cycle is
/// seen once per direction.
std::uint64_t count_closed(const DynamicGraph& g, NodeId s, NodeId at, int remaining,
                           std::vector<bool>& used) {
  if (remaining == 0) return g.has_edge(at, s) ? 1 : 0;
  std::uint64_t total = 0;
  for (NodeId next : g.neighbors(at)) {
    if (used[next]) continue;
    used[next] = true;
    total += count_closed(g, s, next, remaining - 1, used);
    used[next] = false;
  }
  return total;
}

}  // namespace

std::uint64_t bf_st_paths(const DynamicGraph& g, NodeId s, NodeId t, int k) {
  require_cap(g);
  if (k < 2 || k > 4) throw ParameterError("path length must be 2, 3 or 4");
  if (s == t || s >= g.node_count() || t >= g.node_count()) {
    throw ParameterError("need distinct endpoints inside the graph");
  }
  std::vector<bool> used(g.node_count(), false);
  used[s] = true;
  return count_paths(g, s, t, k, used);
}

std::uint64_t bf_s_cycles(const DynamicGraph& g, NodeId s, int k) {
  require_cap(g);
  if (k != 3 && k != 4) throw ParameterError("cycle length must be 3 or 4");
  if (s >= g.node_count()) throw ParameterError("s outside the graph");
  std::vector<bool> used(g.node_count(), false);
  used[s] = true;
  return count_closed(g, s, s, k - 1, used) / 2;
}

bool bf_connected(const DynamicGraph& g) {
  const NodeId n = g.node_count();
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = true;
  NodeId reached = 1;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

Sides Sides::split(NodeId n, NodeId left) {
  if (left > n) throw ParameterError("left side larger than the graph");
  Sides sides;
  sides.label.assign(n, 1);
  std::fill(sides.label.begin(), sides.label.begin() + left, 0);
  return sides;
}

NodeId Sides::count(std::uint8_t side) const {
  return static_cast<NodeId>(std::count(label.begin(), label.end(), side));
}

MatchingResult bf_bipartite_matching(const DynamicGraph& g, const Sides& sides) {
  const NodeId n = g.node_count();
  if (sides.label.size() != n) throw ParameterError("side labels do not match n");
  for (const NodePair& e : g.edges()) {
    if (sides.label[e.u()] == sides.label[e.v()]) {
      throw ParameterError("edge (" + std::to_string(e.u()) + "," +
                           std::to_string(e.v()) + ") is not bipartite");
    }
  }
  constexpr NodeId kFree = ~NodeId{0};
  std::vector<NodeId> mate(n, kFree);
  std::vector<bool> visited;

  // Kuhn's algorithm: one DFS per left node.
  auto try_kuhn = [&](auto&& self, NodeId v) -> bool {
    for (NodeId w : g.neighbors(v)) {
      if (visited[w]) continue;
      visited[w] = true;
      if (mate[w] == kFree || self(self, mate[w])) {
        mate[w] = v;
        mate[v] = w;
        return true;
      }
    }
    return false;
  };

  MatchingResult result;
  for (NodeId v = 0; v < n; ++v) {
    if (sides.label[v] != 0) continue;
    visited.assign(n, false);
    if (try_kuhn(try_kuhn, v)) ++result.size;
  }
  const NodeId left = sides.count(0);
  result.perfect = left == n - left && result.size == left;
  return result;
}

std::uint64_t bf_min_vertex_cover(const DynamicGraph& g) {
  const NodeId n = g.node_count();
  if (n > 24) throw ParameterError("exhaustive vertex cover limited to n <= 24");
  const std::vector<NodePair> edges = g.edges();
  std::uint64_t best = n;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const auto size = static_cast<std::uint64_t>(std::popcount(mask));
    if (size >= best) continue;
    const bool covers = std::all_of(edges.begin(), edges.end(), [&](NodePair e) {
      return ((mask >> e.u()) & 1U) || ((mask >> e.v()) & 1U);
    });
    if (covers) best = size;
  }
  return best;
}

// ---------------------------------------------------------------------------

DenseAdjacency::DenseAdjacency(const DynamicGraph& g)
    : words_((g.node_count() + 63) / 64),
      n_(g.node_count()),
      bits_(static_cast<std::size_t>(n_) * words_, 0) {
  for (const NodePair& e : g.edges()) set(e, true);
}

void DenseAdjacency::set(NodePair e, bool present) {
  const std::uint64_t bu = std::uint64_t{1} << (e.u() % 64);
  const std::uint64_t bv = std::uint64_t{1} << (e.v() % 64);
  std::uint64_t& wu = bits_[e.v() * words_ + e.u() / 64];
  std::uint64_t& wv = bits_[e.u() * words_ + e.v() / 64];
  if (present) {
    wu |= bu;
    wv |= bv;
  } else {
    wu &= ~bu;
    wv &= ~bv;
  }
}

bool DenseAdjacency::connected() const {
  if (n_ <= 1) return true;
  std::vector<std::uint64_t> seen(words_, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  NodeId reached = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const std::uint64_t* row = &bits_[v * words_];
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t fresh = row[w] & ~seen[w];
      seen[w] |= fresh;
      while (fresh != 0) {
        const int bit = std::countr_zero(fresh);
        fresh &= fresh - 1;
        stack.push_back(static_cast<NodeId>(w * 64 + bit));
        ++reached;
      }
    }
  }
  return reached == n_;
}

IncrementalMatching::IncrementalMatching(const DynamicGraph& g, NodeId left,
                                         NodeId right)
    : left_(left),
      right_(right),
      words_((right + 63) / 64),
      adj_(static_cast<std::size_t>(left) * words_, 0),
      match_left_(left, -1),
      match_right_(right, -1) {
  if (g.node_count() != left + right) {
    throw ParameterError("matching sides do not cover the graph");
  }
  for (const NodePair& e : g.edges()) {
    if (e.u() >= left || e.v() < left) {
      throw ParameterError("edge inside one side of the bipartition");
    }
    const NodeId j = e.v() - left;
    adj_[e.u() * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
  }
  while (augment()) {
  }
}

void IncrementalMatching::set(NodePair e, bool present) {
  if (e.u() >= left_ || e.v() < left_) {
    throw ParameterError("edge inside one side of the bipartition");
  }
  const NodeId i = e.u();
  const NodeId j = e.v() - left_;
  std::uint64_t& word = adj_[i * words_ + j / 64];
  const std::uint64_t bit = std::uint64_t{1} << (j % 64);
  if (present == static_cast<bool>(word & bit)) return;
  if (present) {
    word |= bit;
  } else {
    word &= ~bit;
    if (match_left_[i] == static_cast<std::int64_t>(j)) {
      match_left_[i] = -1;
      match_right_[j] = -1;
      --size_;
    }
  }
  augment();
}

bool IncrementalMatching::augment() {
  // Alternating BFS from every free left node at once.
  std::vector<std::int64_t> parent_right(right_, -1);
  std::vector<std::uint64_t> seen_right(words_, 0);
  std::vector<NodeId> queue;
  for (NodeId i = 0; i < left_; ++i) {
    if (match_left_[i] < 0) queue.push_back(i);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId i = queue[head];
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t fresh = adj_[i * words_ + w] & ~seen_right[w];
      seen_right[w] |= fresh;
      while (fresh != 0) {
        const auto j = static_cast<NodeId>(w * 64 + std::countr_zero(fresh));
        fresh &= fresh - 1;
        parent_right[j] = i;
        if (match_right_[j] < 0) {
          // Flip the alternating path ending at j.
          std::int64_t cur = j;
          while (cur >= 0) {
            const auto li = static_cast<NodeId>(parent_right[cur]);
            const std::int64_t prev = match_left_[li];
            match_left_[li] = cur;
            match_right_[cur] = li;
            cur = prev;
          }
          ++size_;
          return true;
        }
        queue.push_back(static_cast<NodeId>(match_right_[j]));
      }
    }
  }
  return false;
}

}  // namespace smoothdyn

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

#include "smoothdyn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "smoothdyn/errors.hpp"

namespace smoothdyn {

NodePair::NodePair(NodeId a, NodeId b)
    : u_(std::min(a, b)), v_(std::max(a, b)) {
  if (a == b) {
    throw ParameterError("node pair needs two distinct nodes, got " +
                         std::to_string(a) + " twice");
  }
}

DynamicGraph::DynamicGraph(NodeId n) : adjacency_(n) {}

DynamicGraph::DynamicGraph(NodeId n, std::span<const NodePair> edges)
    : adjacency_(n) {
  for (const NodePair& e : edges) {
    check(e);
    if (!add(e)) {
      throw ParameterError("duplicate edge (" + std::to_string(e.u()) + "," +
                           std::to_string(e.v()) + ")");
    }
  }
}

void DynamicGraph::check(NodePair e) const {
  if (!valid(e)) {
    throw ParameterError("edge (" + std::to_string(e.u()) + "," +
                         std::to_string(e.v()) + ") out of range for n=" +
                         std::to_string(node_count()));
  }
}

bool DynamicGraph::has_edge(NodePair e) const {
  const NodeId a = adjacency_[e.u()].size() <= adjacency_[e.v()].size()
                       ? e.u()
                       : e.v();
  return adjacency_[a].contains(e.other(a));
}

bool DynamicGraph::has_edge(NodeId a, NodeId b) const {
  return a != b && has_edge(NodePair(a, b));
}

bool DynamicGraph::flip(NodePair e) {
  if (add(e)) return true;
  remove(e);
  return false;
}

bool DynamicGraph::add(NodePair e) {
  if (!adjacency_[e.u()].insert(e.v()).second) return false;
  adjacency_[e.v()].insert(e.u());
  ++edge_count_;
  return true;
}

bool DynamicGraph::remove(NodePair e) {
  if (adjacency_[e.u()].erase(e.v()) == 0) return false;
  adjacency_[e.v()].erase(e.u());
  --edge_count_;
  return true;
}

std::vector<NodePair> DynamicGraph::edges() const {
  std::vector<NodePair> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const DynamicGraph& a, const DynamicGraph& b) {
  return a.node_count() == b.node_count() &&
         a.edge_count() == b.edge_count() && a.adjacency_ == b.adjacency_;
}

// ---------------------------------------------------------------------------

NodePair pair_from_index(std::uint64_t k) {
  // Largest v with v(v-1)/2 <= k.
  auto v = static_cast<std::uint64_t>(
      (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (v * (v - 1) / 2 > k) --v;
  while ((v + 1) * v / 2 <= k) ++v;
  const std::uint64_t u = k - v * (v - 1) / 2;
  return {static_cast<NodeId>(u), static_cast<NodeId>(v)};
}

std::uint64_t index_of_pair(NodePair e) {
  const std::uint64_t v = e.v();
  return v * (v - 1) / 2 + e.u();
}

EdgeUniverse EdgeUniverse::complete(NodeId n) {
  EdgeUniverse out;
  out.n_ = n;
  return out;
}

EdgeUniverse EdgeUniverse::restricted(NodeId n,
                                      std::span<const NodePair> allowed) {
  EdgeUniverse out;
  out.n_ = n;
  out.restricted_ = true;
  for (const NodePair& e : allowed) {
    if (e.v() >= n) {
      throw ParameterError("restriction contains a pair out of range");
    }
    if (out.lookup_.insert(e).second) out.allowed_.push_back(e);
  }
  return out;
}

std::uint64_t EdgeUniverse::size() const {
  return restricted_ ? allowed_.size() : pair_count(n_);
}

NodePair EdgeUniverse::at(std::uint64_t index) const {
  return restricted_ ? allowed_[index] : pair_from_index(index);
}

bool EdgeUniverse::contains(NodePair e) const {
  if (e.v() >= n_) return false;
  return !restricted_ || lookup_.contains(e);
}

DynamicGraph random_graph(const EdgeUniverse& universe, Rng& rng) {
  DynamicGraph g(universe.node_count());
  const std::uint64_t m = universe.size();
  for (std::uint64_t i = 0; i < m; ++i) {
    if (rng.bernoulli(0.5)) g.add(universe.at(i));
  }
  return g;
}

DynamicGraph random_graph(NodeId n, Rng& rng) {
  return random_graph(EdgeUniverse::complete(n), rng);
}

void write_edge_list(std::ostream& out, const DynamicGraph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const NodePair& e : g.edges()) out << e.u() << ' ' << e.v() << '\n';
}

DynamicGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("edge list: missing header");
  std::istringstream header(line);
  long long n = -1;
  long long m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) {
    throw FormatError("edge list: header must be \"n m\"");
  }
  std::vector<NodePair> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(in, line)) {
      throw FormatError("edge list: expected " + std::to_string(m) +
                        " edges, got " + std::to_string(i));
    }
    std::istringstream row(line);
    long long a = -1;
    long long b = -1;
    if (!(row >> a >> b) || a < 0 || b < 0 || a >= n || b >= n) {
      throw FormatError("edge list: bad edge on line " + std::to_string(i + 2));
    }
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  return DynamicGraph(static_cast<NodeId>(n), edges);
}

}  // namespace smoothdyn

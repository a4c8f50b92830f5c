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

#include "smoothdyn/p3_general.hpp"

#include <algorithm>
#include <set>

#include "smoothdyn/errors.hpp"

namespace smoothdyn {

AlphaExact alpha_of_exact(boost::rational<long long> p, long long n) {
  using Q = boost::rational<long long>;
  if (p < Q(0) || p > Q(1)) throw ParameterError("p must lie in [0, 1]");
  if (n < 1) throw ParameterError("n must be positive");
  const long long interior = n * (n + 2);
  const long long exterior = (n + 1) * (2 * n + 1) - interior;
  const Q alpha = Q(interior) / (Q(interior) + (Q(1) - p) * Q(exterior));
  return {alpha, alpha * p};
}

Alpha alpha_of(double p, NodeId n) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  if (n < 1) throw ParameterError("n must be positive");
  const double nn = static_cast<double>(n);
  const double interior = nn * (nn + 2.0);
  const double exterior = (nn + 1.0) * (2.0 * nn + 1.0) - interior;
  const double alpha = interior / (interior + (1.0 - p) * exterior);
  return {alpha, alpha * p};
}

namespace {

std::optional<std::size_t> partition_slot(EdgeType type) {
  for (std::size_t k = 0; k < kPartitionedTypes.size(); ++k) {
    if (kPartitionedTypes[k] == type) return k;
  }
  return std::nullopt;
}

}  // namespace

SixteenPack::SixteenPack(const P3Layout& layout, double p, const DynamicGraph& g0,
                         const St3Factory& inner, std::uint64_t seed,
                         PackOptions options)
    : layout_(layout),
      options_(options),
      rng_(Rng::stream(seed, streams::kSequence)),
      interior_(layout.node_count()) {
  if (layout.n() < 2) throw ParameterError("the sixteen-graph split needs n >= 2");
  if (g0.node_count() != layout.node_count()) {
    throw ParameterError("initial graph does not match the layout");
  }
  if (options_.skip_graph && *options_.skip_graph >= kGraphs) {
    throw ParameterError("skip_graph must be below 16");
  }
  const Alpha a = alpha_of(p, layout.n());
  alpha_ = a.alpha;
  p_prime_ = a.p_prime;

  for (const NodePair& e : g0.edges()) {
    const EdgeType type = layout.classify(e);
    if (!P3Layout::interior(type)) {
      throw ParameterError("initial P3 graph has an exterior edge");
    }
    interior_.add(e);
    c_ab_ += type == EdgeType::AB;
    c_sa_ += type == EdgeType::SA;
    c_bt_ += type == EdgeType::BT;
  }
  for (auto& g : graphs_) g = interior_;

  Rng partition_rng = Rng::stream(seed, streams::kInitialGraph);
  for (const NodePair& f : layout.exterior_pairs()) {
    const auto slot = partition_slot(layout.classify(f));
    if (!slot) continue;
    const int part = partition_rng.bernoulli(0.5) ? 1 : 0;
    for (std::size_t i = 0; i < kGraphs; ++i) {
      if (part_bit(i, *slot) == part) graphs_[i].add(f);
    }
  }
  if (partition_rng.bernoulli(0.5)) {
    for (auto& g : graphs_) g.add({layout.s(), layout.t()});
  }

  for (std::size_t i = 0; i < kGraphs; ++i) {
    counters_[i] = inner(layout_, Rng::mix64(seed + 101 * (i + 1)));
    counters_[i]->preprocess(graphs_[i]);
  }
}

void SixteenPack::after_step() {
  ++total_steps_;
  if (hook_) hook_(*this);
  if (options_.max_steps != 0 && total_steps_ >= options_.max_steps) {
    throw SamplingError("sixteen-graph run exceeded " +
                        std::to_string(options_.max_steps) + " flips");
  }
}

void SixteenPack::flip_exterior(NodePair f) {
  for (std::size_t i = 0; i < kGraphs; ++i) {
    if (options_.skip_graph && *options_.skip_graph == i) continue;
    graphs_[i].flip(f);
    counters_[i]->flip(f);
  }
  ++exterior_steps_;
  after_step();
}

std::uint64_t SixteenPack::feed(NodePair e) {
  const EdgeType type = layout_.classify(e);
  if (!P3Layout::interior(type)) {
    throw ContractViolation("P3 change " + std::to_string(e.u()) + "-" +
                            std::to_string(e.v()) + " is not interior");
  }
  const auto& exterior = layout_.exterior_pairs();
  std::uint64_t detours = 0;
  while (!rng_.bernoulli(alpha_)) {
    flip_exterior(exterior[rng_.bounded(exterior.size())]);
    ++detours;
  }
  const bool adding = !interior_.has_edge(e);
  const auto bump = [&](std::uint64_t& c) { c = adding ? c + 1 : c - 1; };
  if (type == EdgeType::AB) bump(c_ab_);
  if (type == EdgeType::SA) bump(c_sa_);
  if (type == EdgeType::BT) bump(c_bt_);
  interior_.flip(e);
  for (std::size_t i = 0; i < kGraphs; ++i) {
    graphs_[i].flip(e);
    counters_[i]->flip(e);
  }
  after_step();
  return detours;
}

Recombination SixteenPack::recombine() {
  Recombination r;
  for (auto& counter : counters_) r.sum += counter->query();
  r.c_ab = c_ab_;
  r.c_sa = c_sa_;
  r.c_bt = c_bt_;
  const auto n = static_cast<std::int64_t>(layout_.n());
  r.numerator = static_cast<std::int64_t>(r.sum) - 4 * static_cast<std::int64_t>(c_ab_) -
                4 * (n - 1) * static_cast<std::int64_t>(c_sa_ + c_bt_);
  if (r.numerator < 0 || r.numerator % 16 != 0) {
    throw InvariantViolation("recombination numerator " + std::to_string(r.numerator) +
                             " is not a non-negative multiple of 16");
  }
  r.count = static_cast<std::uint64_t>(r.numerator / 16);
  return r;
}

std::optional<std::string> SixteenPack::partition_defect() const {
  using PairSet = std::vector<NodePair>;
  std::array<std::uint32_t, kGraphs> signature{};
  for (std::size_t slot = 0; slot < kPartitionedTypes.size(); ++slot) {
    PairSet universe;
    for (const NodePair& f : layout_.exterior_pairs()) {
      if (layout_.classify(f) == kPartitionedTypes[slot]) universe.push_back(f);
    }
    std::sort(universe.begin(), universe.end());
    std::array<PairSet, kGraphs> parts;
    std::vector<PairSet> distinct;
    for (std::size_t i = 0; i < kGraphs; ++i) {
      for (const NodePair& f : universe) {
        if (graphs_[i].has_edge(f)) parts[i].push_back(f);
      }
      if (std::find(distinct.begin(), distinct.end(), parts[i]) == distinct.end()) {
        distinct.push_back(parts[i]);
      }
    }
    const std::string name = to_string(kPartitionedTypes[slot]);
    if (distinct.size() != 2) {
      return name + ": graphs take " + std::to_string(distinct.size()) +
             " different parts instead of 2";
    }
    PairSet joined;
    std::set_union(distinct[0].begin(), distinct[0].end(), distinct[1].begin(),
                   distinct[1].end(), std::back_inserter(joined));
    if (joined.size() != distinct[0].size() + distinct[1].size() || joined != universe) {
      return name + ": the two parts do not split the pair set";
    }
    for (std::size_t i = 0; i < kGraphs; ++i) {
      if (parts[i] == distinct[1]) signature[i] |= 1U << slot;
    }
  }
  std::set<std::uint32_t> seen(signature.begin(), signature.end());
  if (seen.size() != kGraphs) return "part combinations repeat across graphs";

  for (std::uint64_t k = 0; k < pair_count(layout_.node_count()); ++k) {
    const NodePair e = pair_from_index(k);
    if (partition_slot(layout_.classify(e))) continue;
    const bool expected = graphs_[0].has_edge(e);
    for (std::size_t i = 1; i < kGraphs; ++i) {
      if (graphs_[i].has_edge(e) != expected) {
        return "graphs disagree on shared pair " + std::to_string(e.u()) + "-" +
               std::to_string(e.v());
      }
    }
    if (P3Layout::interior(layout_.classify(e)) && interior_.has_edge(e) != expected) {
      return "interior pair differs from the P3 graph";
    }
  }
  return std::nullopt;
}

std::uint64_t SixteenPack::ops() const {
  std::uint64_t total = 0;
  for (const auto& counter : counters_) total += counter->ops();
  return total;
}

namespace {

class PackSt3 : public St3Instance {
 public:
  PackSt3(const P3Layout& layout, double p, St3Factory inner, std::uint64_t seed,
          PackOptions options)
      : layout_(layout), p_(p), inner_(std::move(inner)), seed_(seed), options_(options) {}

  void preprocess(const DynamicGraph& g0) override {
    pack_ = std::make_unique<SixteenPack>(layout_, p_, g0, inner_, seed_, options_);
  }
  void flip(NodePair e) override { pack_->feed(e); }
  std::uint64_t query() override { return pack_->query(); }
  std::uint64_t ops() const override { return pack_ ? pack_->ops() : 0; }

 private:
  P3Layout layout_;
  double p_;
  St3Factory inner_;
  std::uint64_t seed_;
  PackOptions options_;
  std::unique_ptr<SixteenPack> pack_;
};

}  // namespace

St3Factory pack_st3_factory(double p, St3Factory inner, PackOptions options) {
  return [p, inner = std::move(inner), options](const P3Layout& layout, std::uint64_t seed) {
    return std::make_unique<PackSt3>(layout, p, inner, seed, options);
  };
}

}  // namespace smoothdyn

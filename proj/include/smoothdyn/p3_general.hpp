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

#ifndef SMOOTHDYN_P3_GENERAL_HPP_
#define SMOOTHDYN_P3_GENERAL_HPP_

// Counting s-t 3-paths in P3-partite dynamic graphs through sixteen general
// graphs that share the interior changes and split the exterior pairs.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "smoothdyn/graph.hpp"
#include "smoothdyn/reduction.hpp"
#include "smoothdyn/rng.hpp"

namespace smoothdyn {

struct AlphaExact {
  boost::rational<long long> alpha;
  boost::rational<long long> p_prime;
};

/// alpha = |R| / (|R| + (1-p)|R-bar|) with |R| = n(n+2), |R-bar| = (n+1)(2n+1) - n(n+2).
AlphaExact alpha_of_exact(boost::rational<long long> p, long long n);

struct Alpha {
  double alpha;
  double p_prime;
};
Alpha alpha_of(double p, NodeId n);

/// The four exterior types whose pairs are split between the graphs.
inline constexpr std::array<EdgeType, 4> kPartitionedTypes = {EdgeType::SB, EdgeType::AT,
                                                              EdgeType::AA, EdgeType::BB};

struct PackOptions {
  /// Abort once this many flips (interior plus exterior) were realized. 0 disables.
  std::uint64_t max_steps = 0;
  /// Fault injection: exterior flips bypass this graph.
  std::optional<std::size_t> skip_graph;
};

struct Recombination {
  std::uint64_t sum = 0;  // sum of the sixteen st3 answers
  std::uint64_t c_ab = 0;
  std::uint64_t c_sa = 0;
  std::uint64_t c_bt = 0;
  std::int64_t numerator = 0;  // sum - 4 c_ab - 4(n-1)(c_sa + c_bt)
  std::uint64_t count = 0;     // numerator / 16
};

class SixteenPack {
 public:
  static constexpr std::size_t kGraphs = 16;
  using StepHook = std::function<void(const SixteenPack&)>;

  /// `g0` holds the interior graph; every edge must be interior.
  SixteenPack(const P3Layout& layout, double p, const DynamicGraph& g0,
              const St3Factory& inner, std::uint64_t seed, PackOptions options = {});

  /// Consumes one interior flip. Exterior flips are interleaved until the
  /// alpha coin selects the interior change. Returns the exterior flips made.
  std::uint64_t feed(NodePair interior_edge);

  Recombination recombine();
  std::uint64_t query() { return recombine().count; }

  /// Empty when the sixteen graphs properly partition the four exterior types
  /// and agree on all other pairs; otherwise a description of the defect.
  std::optional<std::string> partition_defect() const;
  bool properly_partitioned() const { return !partition_defect(); }

  void set_step_hook(StepHook hook) { hook_ = std::move(hook); }

  const P3Layout& layout() const { return layout_; }
  const DynamicGraph& graph(std::size_t i) const { return graphs_.at(i); }
  const DynamicGraph& interior_graph() const { return interior_; }
  double alpha() const { return alpha_; }
  double p_prime() const { return p_prime_; }
  std::uint64_t total_steps() const { return total_steps_; }
  std::uint64_t exterior_steps() const { return exterior_steps_; }
  std::uint64_t ops() const;

  /// Which part graph i takes from partitioned type `slot` (0..3).
  static int part_bit(std::size_t i, std::size_t slot) {
    return static_cast<int>((i >> slot) & 1U);
  }

 private:
  void flip_exterior(NodePair f);
  void after_step();

  P3Layout layout_;
  double alpha_;
  double p_prime_;
  PackOptions options_;
  Rng rng_;
  DynamicGraph interior_;
  std::array<DynamicGraph, kGraphs> graphs_;
  std::array<std::unique_ptr<St3Instance>, kGraphs> counters_;
  std::uint64_t c_ab_ = 0;
  std::uint64_t c_sa_ = 0;
  std::uint64_t c_bt_ = 0;
  std::uint64_t total_steps_ = 0;
  std::uint64_t exterior_steps_ = 0;
  StepHook hook_;
};

/// An st3 instance for P3-partite graphs backed by a SixteenPack whose
/// sixteen general-graph counters come from `inner`.
St3Factory pack_st3_factory(double p, St3Factory inner, PackOptions options = {});

}  // namespace smoothdyn

#endif  // SMOOTHDYN_P3_GENERAL_HPP_

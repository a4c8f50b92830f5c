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

#ifndef SMOOTHDYN_COUNTERS_HPP_
#define SMOOTHDYN_COUNTERS_HPP_

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "smoothdyn/graph.hpp"
#include "smoothdyn/smoothing.hpp"

namespace smoothdyn {

/// Elementary-operation accounting. One op is a membership test, a counter
/// write, or one visited neighbor; every update costs at least one op.
struct OpStats {
  std::uint64_t updates = 0;
  std::uint64_t nulls = 0;
  std::uint64_t ops = 0;
  /// Updates that iterated a neighborhood.
  std::uint64_t expensive = 0;
};

inline constexpr std::uint64_t binom2(std::uint64_t k) {
  return k * (k - 1) / 2;
}

/// c_s2u[u]: number of 2-paths s-v-u with v not in {s, u}, and v != t when a
/// node t is excluded.
class TwoPathTable {
 public:
  TwoPathTable(NodeId n, NodeId s, std::optional<NodeId> t_excluded);

  /// Depth-2 scan from s; calls `on_set(u, value)` for every nonzero entry.
  template <class OnSet>
  void preprocess(const DynamicGraph& g, OnSet&& on_set, OpStats& stats);

  /// Pre-flip update for edge `e` becoming `now_present`. Calls
  /// `on_change(u, delta)` just before each entry moves. Returns whether the
  /// neighborhood branch ran.
  template <class OnChange>
  bool update(const DynamicGraph& before, NodePair e, bool now_present,
              OnChange&& on_change, OpStats& stats);

  std::uint64_t query(NodeId u) const { return u < c_.size() ? c_[u] : 0; }
  NodeId source() const { return s_; }
  std::optional<NodeId> excluded() const { return t_; }

 private:
  bool middle_allowed(NodeId v) const { return !t_ || v != *t_; }
  void bump(NodeId u, std::int64_t delta) {
    c_[u] = static_cast<std::uint64_t>(static_cast<std::int64_t>(c_[u]) + delta);
  }

  NodeId s_;
  std::optional<NodeId> t_;
  std::vector<std::uint64_t> c_;
};

enum class CounterProblem : std::uint8_t { ST2, ST3, ST4, STriangle, S4Cycle };

std::string_view to_string(CounterProblem problem);
CounterProblem parse_counter_problem(std::string_view name);

/// Incremental counter with the update-before-flip contract: `update` reads
/// the pre-flip graph and is told the post-flip presence of `e`.
class DynamicCounter : public Observer, public LazyAlgorithm {
 public:
  virtual CounterProblem problem() const = 0;
  virtual void preprocess(const DynamicGraph& g0) = 0;
  virtual void update(const DynamicGraph& before, NodePair e, bool now_present) = 0;
  virtual std::uint64_t query() const = 0;

  /// Forwards effective changes; no-op Add/Remove are ignored.
  void on_change(const DynamicGraph& before, const Change& change) override;
  void update_flip(const DynamicGraph& before, NodePair e) override;
  void update_null() override { ++stats_.nulls; }

  const OpStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }
  bool last_update_expensive() const { return last_expensive_; }

 protected:
  void begin_update() {
    ++stats_.updates;
    ++stats_.ops;
    last_expensive_ = false;
  }
  void end_update(bool expensive) {
    last_expensive_ = expensive;
    if (expensive) ++stats_.expensive;
  }

  OpStats stats_;
  bool last_expensive_ = false;
};

/// Simple s-t 2-paths, read off c_s2u[t].
class St2Counter : public DynamicCounter {
 public:
  St2Counter(NodeId n, NodeId s, NodeId t);
  CounterProblem problem() const override { return CounterProblem::ST2; }
  void preprocess(const DynamicGraph& g0) override;
  void update(const DynamicGraph& before, NodePair e, bool now_present) override;
  std::uint64_t query() const override { return s2u_.query(t_); }

 private:
  NodeId t_;
  TwoPathTable s2u_;
};

/// Simple s-t 3-paths: sum of c_s2u[u] over neighbors u of t.
class St3Counter : public DynamicCounter {
 public:
  St3Counter(NodeId n, NodeId s, NodeId t);
  CounterProblem problem() const override { return CounterProblem::ST3; }
  void preprocess(const DynamicGraph& g0) override;
  void update(const DynamicGraph& before, NodePair e, bool now_present) override;
  std::uint64_t query() const override { return c_; }
  const TwoPathTable& table() const { return s2u_; }

 private:
  NodeId s_;
  NodeId t_;
  TwoPathTable s2u_;
  std::uint64_t c_ = 0;
};

struct St4Options {
  /// Mutation-test hook: drops the degenerate-path correction on removals.
  bool degenerate_fault = false;
};

/// Simple s-t 4-paths.
class St4Counter : public DynamicCounter {
 public:
  St4Counter(NodeId n, NodeId s, NodeId t, St4Options options = {});
  CounterProblem problem() const override { return CounterProblem::ST4; }
  void preprocess(const DynamicGraph& g0) override;
  void update(const DynamicGraph& before, NodePair e, bool now_present) override;
  std::uint64_t query() const override {
    return static_cast<std::uint64_t>(c_);
  }

 private:
  void update_hub(const DynamicGraph& before, NodeId hub, NodeId other_hub,
                  const TwoPathTable& other_table, NodeId u, std::int64_t delta);
  std::int64_t fix(bool removal, bool edge) const;

  NodeId s_;
  NodeId t_;
  St4Options options_;
  TwoPathTable s2u_;
  TwoPathTable t2u_;
  std::int64_t c_ = 0;
};

/// Triangles through s; keeps twice the count internally.
class STriangleCounter : public DynamicCounter {
 public:
  STriangleCounter(NodeId n, NodeId s);
  CounterProblem problem() const override { return CounterProblem::STriangle; }
  void preprocess(const DynamicGraph& g0) override;
  void update(const DynamicGraph& before, NodePair e, bool now_present) override;
  /// Throws InvariantViolation if the internal counter is odd.
  std::uint64_t query() const override;
  std::uint64_t raw() const { return c_; }

 private:
  NodeId s_;
  TwoPathTable s2u_;
  std::uint64_t c_ = 0;
};

/// 4-cycles through s: sum over midpoints u of binom(c_s2u[u], 2).
class S4CycleCounter : public DynamicCounter {
 public:
  S4CycleCounter(NodeId n, NodeId s);
  CounterProblem problem() const override { return CounterProblem::S4Cycle; }
  void preprocess(const DynamicGraph& g0) override;
  void update(const DynamicGraph& before, NodePair e, bool now_present) override;
  std::uint64_t query() const override { return c_; }

 private:
  NodeId s_;
  TwoPathTable s2u_;
  std::uint64_t c_ = 0;
};

/// `t` is ignored for the cycle problems.
std::unique_ptr<DynamicCounter> make_counter(CounterProblem problem, NodeId n,
                                             NodeId s, NodeId t,
                                             St4Options options = {});

// --- Deciders ---------------------------------------------------------------

enum class DecisionProblem : std::uint8_t {
  Connectivity,
  BipPerfectMatching,
  BipMaxMatching,
  BipMinVertexCover,
};

std::string_view to_string(DecisionProblem problem);

/// Answers are 0/1 for decision problems and a size otherwise.
class Decider : public Observer {
 public:
  virtual std::int64_t query(const DynamicGraph& current) = 0;
  void on_change(const DynamicGraph&, const Change&) override { ++rounds_; }
  std::uint64_t rounds() const { return rounds_; }

 protected:
  std::uint64_t rounds_ = 0;
};

/// Ignores updates and answers "yes" or the side size.
class TrivialDecider : public Decider {
 public:
  TrivialDecider(DecisionProblem problem, NodeId side_size)
      : problem_(problem), side_(side_size) {}
  std::int64_t query(const DynamicGraph&) override { return constant(); }
  std::int64_t constant() const;

 private:
  DecisionProblem problem_;
  NodeId side_;
};

/// Exact answers up to round r_p = n binom(n,2) / (1 - p), the constant
/// answer afterwards.
class HybridDecider : public Decider {
 public:
  /// Bipartite problems use sides [0, side_size) and [side_size, 2 side_size).
  HybridDecider(DecisionProblem problem, double p, NodeId n, NodeId side_size);
  std::int64_t query(const DynamicGraph& current) override;
  double switch_round() const { return r_p_; }
  bool exact_phase() const { return static_cast<double>(rounds_) < r_p_; }
  std::uint64_t exact_queries() const { return exact_queries_; }

 private:
  TrivialDecider fallback_;
  DecisionProblem problem_;
  NodeId side_;
  double r_p_;
  std::uint64_t exact_queries_ = 0;
};

double hybrid_switch_round(double p, NodeId n);

// --- Template definitions ---------------------------------------------------

template <class OnSet>
void TwoPathTable::preprocess(const DynamicGraph& g, OnSet&& on_set,
                              OpStats& stats) {
  std::fill(c_.begin(), c_.end(), 0);
  std::vector<NodeId> touched;
  for (NodeId v : g.neighbors(s_)) {
    ++stats.ops;
    if (!middle_allowed(v)) continue;
    for (NodeId u : g.neighbors(v)) {
      ++stats.ops;
      if (u == s_) continue;
      if (c_[u]++ == 0) touched.push_back(u);
    }
  }
  for (NodeId u : touched) on_set(u, c_[u]);
}

template <class OnChange>
bool TwoPathTable::update(const DynamicGraph& before, NodePair e,
                          bool now_present, OnChange&& on_change,
                          OpStats& stats) {
  const std::int64_t delta = now_present ? 1 : -1;
  if (e.touches(s_)) {
    const NodeId v = e.other(s_);
    if (!middle_allowed(v)) return false;
    for (NodeId x : before.neighbors(v)) {
      ++stats.ops;
      if (x == s_) continue;
      on_change(x, delta);
      bump(x, delta);
      ++stats.ops;
    }
    return true;
  }
  const NodeId a = e.u();
  const NodeId b = e.v();
  ++stats.ops;
  if (middle_allowed(a) && before.has_edge(s_, a)) {
    on_change(b, delta);
    bump(b, delta);
    ++stats.ops;
  }
  ++stats.ops;
  if (middle_allowed(b) && before.has_edge(s_, b)) {
    on_change(a, delta);
    bump(a, delta);
    ++stats.ops;
  }
  return false;
}

}  // namespace smoothdyn

#endif  // SMOOTHDYN_COUNTERS_HPP_

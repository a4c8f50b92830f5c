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

#include "smoothdyn/counters.hpp"

#include <cmath>
#include <string>

#include "smoothdyn/errors.hpp"
#include "smoothdyn/oracles.hpp"

namespace smoothdyn {

TwoPathTable::TwoPathTable(NodeId n, NodeId s, std::optional<NodeId> t_excluded)
    : s_(s), t_(t_excluded), c_(n, 0) {
  if (s >= n || (t_ && (*t_ >= n || *t_ == s))) {
    throw ParameterError("two-path table needs s < n and t != s");
  }
}

std::string_view to_string(CounterProblem problem) {
  switch (problem) {
    case CounterProblem::ST2: return "st2";
    case CounterProblem::ST3: return "st3";
    case CounterProblem::ST4: return "st4";
    case CounterProblem::STriangle: return "s-triangle";
    case CounterProblem::S4Cycle: return "s-4-cycle";
  }
  return "?";
}

CounterProblem parse_counter_problem(std::string_view name) {
  for (CounterProblem p : {CounterProblem::ST2, CounterProblem::ST3,
                           CounterProblem::ST4, CounterProblem::STriangle,
                           CounterProblem::S4Cycle}) {
    if (name == to_string(p)) return p;
  }
  throw ParameterError("unknown counting problem '" + std::string(name) + "'");
}

void DynamicCounter::on_change(const DynamicGraph& before, const Change& change) {
  if (!is_effective(before, change)) return;
  update(before, *change.edge, present_after(before, change));
}

void DynamicCounter::update_flip(const DynamicGraph& before, NodePair e) {
  update(before, e, !before.has_edge(e));
}

namespace {
void no_change(NodeId, std::int64_t) {}
}  // namespace

// --- st2 --------------------------------------------------------------------

St2Counter::St2Counter(NodeId n, NodeId s, NodeId t)
    : t_(t), s2u_(n, s, std::nullopt) {
  if (t >= n || t == s) throw ParameterError("st2 needs distinct s, t < n");
}

void St2Counter::preprocess(const DynamicGraph& g0) {
  s2u_.preprocess(g0, [](NodeId, std::uint64_t) {}, stats_);
}

void St2Counter::update(const DynamicGraph& before, NodePair e, bool now_present) {
  begin_update();
  end_update(s2u_.update(before, e, now_present, no_change, stats_));
}

// --- st3 --------------------------------------------------------------------

St3Counter::St3Counter(NodeId n, NodeId s, NodeId t)
    : s_(s), t_(t), s2u_(n, s, t) {}

void St3Counter::preprocess(const DynamicGraph& g0) {
  c_ = 0;
  s2u_.preprocess(
      g0,
      [&](NodeId u, std::uint64_t value) {
        ++stats_.ops;
        if (g0.has_edge(u, t_)) c_ += value;
      },
      stats_);
}

void St3Counter::update(const DynamicGraph& before, NodePair e, bool now_present) {
  begin_update();
  const std::int64_t delta = now_present ? 1 : -1;
  if (e.touches(s_) && e.touches(t_)) {
    end_update(false);
    return;
  }
  if (e.touches(t_)) {
    const NodeId u = e.other(t_);
    c_ += static_cast<std::uint64_t>(delta * static_cast<std::int64_t>(s2u_.query(u)));
    ++stats_.ops;
  }
  const bool expensive = s2u_.update(
      before, e, now_present,
      [&](NodeId x, std::int64_t d) {
        ++stats_.ops;
        if (before.has_edge(x, t_)) c_ += static_cast<std::uint64_t>(d);
      },
      stats_);
  end_update(expensive);
}

// --- st4 --------------------------------------------------------------------

St4Counter::St4Counter(NodeId n, NodeId s, NodeId t, St4Options options)
    : s_(s), t_(t), options_(options), s2u_(n, s, t), t2u_(n, t, s) {}

void St4Counter::preprocess(const DynamicGraph& g0) {
  c_ = 0;
  s2u_.preprocess(g0, [](NodeId, std::uint64_t) {}, stats_);
  t2u_.preprocess(g0, [](NodeId, std::uint64_t) {}, stats_);
  for (NodeId u = 0; u < g0.node_count(); ++u) {
    ++stats_.ops;
    c_ += static_cast<std::int64_t>(s2u_.query(u) * t2u_.query(u));
  }
  // Walks s-v-u-v-t are not simple.
  for (NodeId v : g0.neighbors(s_)) {
    ++stats_.ops;
    if (v != t_ && g0.has_edge(v, t_)) {
      c_ -= static_cast<std::int64_t>(g0.degree(v)) - 2;
    }
  }
}

std::int64_t St4Counter::fix(bool removal, bool edge) const {
  if (options_.degenerate_fault) return 0;
  return removal && edge ? 1 : 0;
}

void St4Counter::update_hub(const DynamicGraph& before, NodeId hub,
                            NodeId other_hub, const TwoPathTable& other_table,
                            NodeId u, std::int64_t delta) {
  // Paths hub-u-v-x-other_hub for every neighbor v of u. The table entry of v
  // counts x = u exactly when (u, other_hub) exists.
  ++stats_.ops;
  const std::int64_t back = before.has_edge(u, other_hub) ? 1 : 0;
  for (NodeId v : before.neighbors(u)) {
    ++stats_.ops;
    if (v == hub || v == other_hub) continue;
    c_ += delta * (static_cast<std::int64_t>(other_table.query(v)) - back);
  }
}

void St4Counter::update(const DynamicGraph& before, NodePair e, bool now_present) {
  begin_update();
  const std::int64_t delta = now_present ? 1 : -1;
  const bool removal = !now_present;
  if (e.touches(s_) && e.touches(t_)) {
    end_update(false);
    return;
  }
  bool expensive = false;
  if (e.touches(s_)) {
    update_hub(before, s_, t_, t2u_, e.other(s_), delta);
    expensive = true;
  } else if (e.touches(t_)) {
    update_hub(before, t_, s_, s2u_, e.other(t_), delta);
    expensive = true;
  } else {
    const NodeId u = e.u();
    const NodeId v = e.v();
    const bool su = before.has_edge(s_, u);
    const bool sv = before.has_edge(s_, v);
    const bool ut = before.has_edge(u, t_);
    const bool vt = before.has_edge(v, t_);
    stats_.ops += 4;
    const auto cs = [&](NodeId x) { return static_cast<std::int64_t>(s2u_.query(x)); };
    const auto ct = [&](NodeId x) { return static_cast<std::int64_t>(t2u_.query(x)); };
    if (su) c_ += delta * (ct(v) - fix(removal, ut));  // s-u-v-x-t
    if (sv) c_ += delta * (ct(u) - fix(removal, vt));  // s-v-u-x-t
    if (vt) c_ += delta * (cs(u) - fix(removal, sv));  // s-x-u-v-t
    if (ut) c_ += delta * (cs(v) - fix(removal, su));  // s-x-v-u-t
  }
  s2u_.update(before, e, now_present, no_change, stats_);
  t2u_.update(before, e, now_present, no_change, stats_);
  end_update(expensive);
}

// --- s-triangles ------------------------------------------------------------

STriangleCounter::STriangleCounter(NodeId n, NodeId s)
    : s_(s), s2u_(n, s, std::nullopt) {}

void STriangleCounter::preprocess(const DynamicGraph& g0) {
  c_ = 0;
  s2u_.preprocess(
      g0,
      [&](NodeId u, std::uint64_t value) {
        ++stats_.ops;
        if (g0.has_edge(s_, u)) c_ += value;
      },
      stats_);
}

void STriangleCounter::update(const DynamicGraph& before, NodePair e,
                              bool now_present) {
  begin_update();
  const std::int64_t delta = now_present ? 1 : -1;
  if (e.touches(s_)) {
    // u joins or leaves N(s): its own 2-path count enters or leaves c.
    const NodeId u = e.other(s_);
    c_ += static_cast<std::uint64_t>(delta * static_cast<std::int64_t>(s2u_.query(u)));
    ++stats_.ops;
  }
  const bool expensive = s2u_.update(
      before, e, now_present,
      [&](NodeId x, std::int64_t d) {
        ++stats_.ops;
        if (before.has_edge(s_, x)) c_ += static_cast<std::uint64_t>(d);
      },
      stats_);
  end_update(expensive);
}

std::uint64_t STriangleCounter::query() const {
  if (c_ % 2 != 0) {
    throw InvariantViolation("s-triangle counter holds an odd value " +
                             std::to_string(c_));
  }
  return c_ / 2;
}

// --- s-4-cycles -------------------------------------------------------------

S4CycleCounter::S4CycleCounter(NodeId n, NodeId s)
    : s_(s), s2u_(n, s, std::nullopt) {}

void S4CycleCounter::preprocess(const DynamicGraph& g0) {
  c_ = 0;
  s2u_.preprocess(
      g0, [&](NodeId, std::uint64_t value) { c_ += binom2(value); }, stats_);
}

void S4CycleCounter::update(const DynamicGraph& before, NodePair e,
                            bool now_present) {
  begin_update();
  const bool expensive = s2u_.update(
      before, e, now_present,
      [&](NodeId x, std::int64_t d) {
        const std::uint64_t old = s2u_.query(x);
        const std::uint64_t next = d > 0 ? old + 1 : old - 1;
        c_ = c_ - binom2(old) + binom2(next);
        stats_.ops += 2;
      },
      stats_);
  end_update(expensive);
}

std::unique_ptr<DynamicCounter> make_counter(CounterProblem problem, NodeId n,
                                             NodeId s, NodeId t,
                                             St4Options options) {
  switch (problem) {
    case CounterProblem::ST2: return std::make_unique<St2Counter>(n, s, t);
    case CounterProblem::ST3: return std::make_unique<St3Counter>(n, s, t);
    case CounterProblem::ST4: return std::make_unique<St4Counter>(n, s, t, options);
    case CounterProblem::STriangle: return std::make_unique<STriangleCounter>(n, s);
    case CounterProblem::S4Cycle: return std::make_unique<S4CycleCounter>(n, s);
  }
  throw ParameterError("unknown counting problem");
}

// --- deciders ---------------------------------------------------------------

std::string_view to_string(DecisionProblem problem) {
  switch (problem) {
    case DecisionProblem::Connectivity: return "connectivity";
    case DecisionProblem::BipPerfectMatching: return "bip-perfect-matching";
    case DecisionProblem::BipMaxMatching: return "bip-max-matching";
    case DecisionProblem::BipMinVertexCover: return "bip-min-vertex-cover";
  }
  return "?";
}

std::int64_t TrivialDecider::constant() const {
  switch (problem_) {
    case DecisionProblem::Connectivity:
    case DecisionProblem::BipPerfectMatching: return 1;
    case DecisionProblem::BipMaxMatching:
    case DecisionProblem::BipMinVertexCover: return side_;
  }
  return 1;
}

double hybrid_switch_round(double p, NodeId n) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ParameterError("hybrid decider needs 0 <= p < 1");
  }
  return static_cast<double>(n) * static_cast<double>(pair_count(n)) / (1.0 - p);
}

HybridDecider::HybridDecider(DecisionProblem problem, double p, NodeId n,
                             NodeId side_size)
    : fallback_(problem, side_size),
      problem_(problem),
      side_(side_size),
      r_p_(hybrid_switch_round(p, n)) {}

std::int64_t HybridDecider::query(const DynamicGraph& current) {
  if (!exact_phase()) return fallback_.constant();
  ++exact_queries_;
  if (problem_ == DecisionProblem::Connectivity) {
    return bf_connected(current) ? 1 : 0;
  }
  const MatchingResult m =
      bf_bipartite_matching(current, Sides::split(current.node_count(), side_));
  if (problem_ == DecisionProblem::BipPerfectMatching) return m.perfect ? 1 : 0;
  // Max matching and min vertex cover coincide on bipartite graphs.
  return static_cast<std::int64_t>(m.size);
}

}  // namespace smoothdyn

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

#include "smoothdyn/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "smoothdyn/errors.hpp"

namespace smoothdyn {

bool EmbeddingTask::feasible() const {
  const double nn = static_cast<double>(n);
  return static_cast<double>(region.size()) <= p * nn * nn / 18.0;
}

void EmbeddingTask::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p outside [0,1]");
  std::unordered_set<NodePair, NodePairHash> r;
  for (const NodePair& e : region) {
    if (e.v() >= n) throw ParameterError("region pair out of range");
    if (!r.insert(e).second) throw ParameterError("duplicate pair in region");
  }
  std::unordered_set<NodePair, NodePairHash> seen;
  for (const NodePair& e : flips) {
    if (!r.contains(e)) throw ParameterError("R' is not contained in R");
    if (!seen.insert(e).second) throw ParameterError("duplicate pair in R'");
  }
  if (guard == GuardPolicy::Enforce && !feasible()) {
    throw ParameterError("region too large: r=" + std::to_string(region.size()) +
                         " exceeds p n^2 / 18");
  }
}

double adaptive_failure_bound(double p, double steps) {
  return 2.0 * std::exp(-p * steps / 40.0);
}

double oblivious_ar_failure_bound(double p, double steps, double r_prime,
                                  double r, double n) {
  const double q = 1.0 - p;
  return r_prime * std::pow(q, steps / r_prime) + q * steps * r / (n * n);
}

double oblivious_ar_failure_bound_pairs(double p, double steps, double r_prime,
                                        double r, double n) {
  const double q = 1.0 - p;
  const double rounds = std::floor(steps / r_prime);
  return r_prime * std::pow(q, rounds) + q * steps * r / (n * (n - 1) / 2.0);
}

// --- adaptive ---------------------------------------------------------------

AdaptiveEmbedder::AdaptiveEmbedder(const EmbeddingTask& task,
                                   const DynamicGraph& start)
    : region_(task.region),
      position_(task.region.size(), -1),
      filler_(0, 1),
      last_proposal_(0, 1) {
  (void)start;
  for (std::size_t i = 0; i < region_.size(); ++i) index_.emplace(region_[i], i);
  for (const NodePair& e : task.flips) toggle(index_.at(e));
  for (std::uint64_t k = 0; k < pair_count(task.n); ++k) {
    const NodePair e = pair_from_index(k);
    if (!index_.contains(e)) {
      filler_ = e;
      break;
    }
  }
}

void AdaptiveEmbedder::toggle(std::size_t index) {
  if (position_[index] >= 0) {
    const auto pos = static_cast<std::size_t>(position_[index]);
    const std::size_t last = pending_.back();
    pending_[pos] = last;
    position_[last] = static_cast<std::int64_t>(pos);
    pending_.pop_back();
    position_[index] = -1;
  } else {
    position_[index] = static_cast<std::int64_t>(pending_.size());
    pending_.push_back(index);
  }
}

Proposal AdaptiveEmbedder::propose(std::uint64_t, const DynamicGraph*) {
  last_was_proposal_ = true;
  if (pending_.empty()) {
    ++outside_;
    last_proposal_ = filler_;
    return {filler_};
  }
  last_proposal_ = region_[pending_.back()];
  return {last_proposal_};
}

void AdaptiveEmbedder::observe(const DynamicGraph& before, const Change& realized) {
  if (!is_effective(before, realized)) return;
  const auto it = index_.find(*realized.edge);
  if (it == index_.end()) return;
  if (!(last_was_proposal_ && *realized.edge == last_proposal_)) ++hits_;
  toggle(it->second);
}

EmbedResult adaptive_embed(DynamicGraph& g, const EmbeddingTask& task,
                           std::uint64_t budget, std::uint64_t seed,
                           std::span<Observer* const> observers) {
  task.validate();
  if (task.n != g.node_count()) throw ParameterError("task n does not match graph");
  std::vector<bool> start(task.region.size());
  for (std::size_t i = 0; i < task.region.size(); ++i) {
    start[i] = g.has_edge(task.region[i]);
  }
  const std::unordered_set<NodePair, NodePairHash> region(task.region.begin(),
                                                           task.region.end());
  AdaptiveEmbedder embedder(task, g);
  SmoothingParams params;
  params.p = task.p;
  params.seed = seed;
  SmoothedSource source(AdversaryModel::Adaptive, params, g.node_count(), embedder);

  EmbedResult result;
  while (!embedder.done() && result.steps_used < budget) {
    const ChangeEvent event = source.next_change(g);
    for (Observer* observer : observers) observer->on_change(g, event.change);
    source.notify_applied(g, event.change);
    if (event.provenance == Provenance::Random && region.contains(*event.change.edge)) {
      ++result.random_hits_on_region;
    }
    apply_change(g, event.change);
    ++result.steps_used;
  }
  result.success = embedder.done();
  if (result.success) {
    const std::unordered_set<NodePair, NodePairHash> wanted(task.flips.begin(),
                                                            task.flips.end());
    for (std::size_t i = 0; i < task.region.size(); ++i) {
      const bool changed = g.has_edge(task.region[i]) != start[i];
      if (changed != wanted.contains(task.region[i])) {
        throw InvariantViolation("embedder reported success on a wrong region state");
      }
    }
  }
  return result;
}

std::uint64_t multiphase_cutoff(double p, std::uint64_t r_hat, std::uint64_t k,
                                double c) {
  if (!(p > 0.0)) throw ParameterError("multi-phase cutoff needs p > 0");
  const double log_k = std::max(1.0, std::log(static_cast<double>(k)));
  return static_cast<std::uint64_t>(
      std::ceil(40.0 * (c + 2.0) * static_cast<double>(r_hat) * log_k / p));
}

MultiphaseResult multiphase_embed(DynamicGraph& g, std::span<const NodePair> region,
                                  std::span<const std::vector<NodePair>> phases,
                                  double p, double c, std::uint64_t seed,
                                  GuardPolicy guard,
                                  std::span<Observer* const> observers) {
  MultiphaseResult result;
  std::uint64_t r_hat = 0;
  for (const auto& phase : phases) {
    if (phase.empty()) throw ParameterError("every phase needs at least one flip");
    r_hat = std::max<std::uint64_t>(r_hat, phase.size());
  }
  EmbeddingTask task;
  task.n = g.node_count();
  task.region.assign(region.begin(), region.end());
  task.p = p;
  task.guard = guard;
  task.validate();
  const std::uint64_t k = phases.size();
  result.success = true;
  if (k == 0) {
    result.within_budget = true;
    return result;
  }
  result.cutoff = multiphase_cutoff(p, r_hat, k, c);
  result.budget = 12.0 * static_cast<double>(k) * static_cast<double>(r_hat) / p;
  task.guard = GuardPolicy::ReportOnly;
  for (std::size_t i = 0; i < k; ++i) {
    task.flips = phases[i];
    const EmbedResult phase = adaptive_embed(
        g, task, result.cutoff, Rng::mix64(seed + i + 1), observers);
    result.phase_steps.push_back(phase.steps_used);
    result.total_steps += phase.steps_used;
    if (!phase.success) {
      result.success = false;
      break;
    }
  }
  result.within_budget =
      result.success && static_cast<double>(result.total_steps) <= result.budget;
  return result;
}

// --- oblivious add/remove ---------------------------------------------------

RoundRobinInsister::RoundRobinInsister(std::vector<NodePair> edges,
                                       std::vector<bool> targets)
    : edges_(std::move(edges)), targets_(std::move(targets)) {
  if (edges_.empty() || edges_.size() != targets_.size()) {
    throw ParameterError("insister needs one target per edge");
  }
}

Proposal RoundRobinInsister::propose(std::uint64_t step, const DynamicGraph*) {
  const std::size_t i = step % edges_.size();
  return {edges_[i], targets_[i] ? ChangeKind::Add : ChangeKind::Remove};
}

ObliviousEmbedResult oblivious_ar_embed(DynamicGraph& g, const EmbeddingTask& task,
                                        std::uint64_t steps, std::uint64_t seed) {
  task.validate();
  std::vector<bool> targets;
  for (const NodePair& e : task.flips) targets.push_back(!g.has_edge(e));
  const std::unordered_set<NodePair, NodePairHash> region(task.region.begin(),
                                                           task.region.end());
  RoundRobinInsister insister(task.flips, targets);
  SmoothingParams params;
  params.p = task.p;
  params.seed = seed;
  SmoothedSource source(AdversaryModel::ObliviousAddRemove, params,
                        g.node_count(), insister);
  ObliviousEmbedResult result;
  for (std::uint64_t i = 0; i < steps; ++i) {
    const ChangeEvent event = source.next_change(g);
    if (event.provenance == Provenance::Random &&
        region.contains(*event.change.edge)) {
      ++result.random_hits_on_region;
    }
    apply_change(g, event.change);
  }
  result.targets_reached = true;
  for (std::size_t i = 0; i < task.flips.size(); ++i) {
    if (g.has_edge(task.flips[i]) != targets[i]) result.targets_reached = false;
  }
  result.success = result.targets_reached && result.random_hits_on_region == 0;
  return result;
}

// --- scripts ----------------------------------------------------------------

std::vector<ScriptPhase> parse_script(std::istream& in) {
  std::vector<ScriptPhase> script;
  bool open = false;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    std::istringstream row(line);
    std::string word;
    if (!(row >> word) || word[0] == '#') continue;
    const auto fail = [&](const std::string& what) {
      throw FormatError("script line " + std::to_string(line_no) + ": " + what);
    };
    if (word == "phase") {
      if (open) fail("previous phase has no 'expect' line");
      script.emplace_back();
      open = true;
    } else if (word == "flip") {
      if (!open) fail("'flip' outside a phase");
      long long u = -1;
      long long v = -1;
      if (!(row >> u >> v) || u < 0 || v < 0 || u == v) fail("bad 'flip u v'");
      script.back().flips.emplace_back(static_cast<NodeId>(u),
                                       static_cast<NodeId>(v));
    } else if (word == "expect") {
      if (!open) fail("'expect' outside a phase");
      if (!(row >> script.back().expect)) fail("'expect' needs a token");
      open = false;
    } else {
      fail("unknown keyword '" + word + "'");
    }
  }
  if (open) throw FormatError("script ends inside a phase");
  return script;
}

void write_script(std::ostream& out, std::span<const ScriptPhase> script) {
  for (const ScriptPhase& phase : script) {
    out << "phase\n";
    for (const NodePair& e : phase.flips) out << "flip " << e.u() << ' ' << e.v() << '\n';
    out << "expect " << phase.expect << '\n';
  }
}

DriverResult scripted_phase_driver(std::span<const ScriptPhase> script,
                                   DynamicGraph g, const DriverConfig& config,
                                   const QueryFn& query,
                                   std::span<Observer* const> observers) {
  const NodeId n = g.node_count();
  std::vector<bool> in_hat(n, false);
  for (NodeId x : config.region_nodes) {
    if (x >= n || in_hat[x]) throw ParameterError("bad controlled node set");
    in_hat[x] = true;
  }
  std::vector<NodePair> region;
  for (NodeId x : config.region_nodes) {
    for (NodeId y = 0; y < n; ++y) {
      if (y != x && !(in_hat[y] && y < x)) region.emplace_back(x, y);
    }
  }
  std::vector<std::vector<NodePair>> batches;
  for (const ScriptPhase& phase : script) {
    for (const NodePair& e : phase.flips) {
      if (!in_hat[e.u()] || !in_hat[e.v()]) {
        throw ParameterError("script flips a pair outside the controlled nodes");
      }
    }
    batches.push_back(phase.flips);
  }

  EmbeddingTask setup;
  setup.n = n;
  setup.region = region;
  setup.p = config.p;
  for (const NodePair& e : region) {
    if (g.has_edge(e)) setup.flips.push_back(e);
  }
  setup.validate();

  DriverResult result;
  if (setup.flips.empty()) {
    result.setup_ok = true;
  } else {
    const double need = std::max(10.0 * static_cast<double>(setup.flips.size()),
                                 40.0 * std::log(2000.0));
    const auto budget = static_cast<std::uint64_t>(std::ceil(need / config.p));
    const EmbedResult r = adaptive_embed(g, setup, budget, config.seed, observers);
    result.setup_ok = r.success;
    result.setup_steps = r.steps_used;
  }

  std::uint64_t r_hat = 1;
  for (const auto& batch : batches) r_hat = std::max<std::uint64_t>(r_hat, batch.size());
  const std::uint64_t cutoff =
      batches.empty() ? 0 : multiphase_cutoff(config.p, r_hat, batches.size(), config.c);
  bool intact = result.setup_ok;
  EmbeddingTask task = setup;
  task.guard = GuardPolicy::ReportOnly;
  for (std::size_t i = 0; i < script.size(); ++i) {
    PhaseRecord record;
    record.phase = i;
    record.expected = script[i].expect;
    if (!batches[i].empty()) {
      task.flips = batches[i];
      const EmbedResult r = adaptive_embed(g, task, cutoff,
                                           Rng::mix64(config.seed + i + 1), observers);
      record.steps = r.steps_used;
      intact = intact && r.success;
    }
    record.verified = intact;
    record.observed = query(g);
    result.phases.push_back(std::move(record));
  }
  result.graph = std::move(g);
  return result;
}

}  // namespace smoothdyn

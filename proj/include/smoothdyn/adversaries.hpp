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

#ifndef SMOOTHDYN_ADVERSARIES_HPP_
#define SMOOTHDYN_ADVERSARIES_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "smoothdyn/graph.hpp"
#include "smoothdyn/smoothing.hpp"

namespace smoothdyn {

enum class GuardPolicy : std::uint8_t { Enforce, ReportOnly };

/// A controlled region R and the flips R' to realize inside it.
struct EmbeddingTask {
  NodeId n = 0;
  std::vector<NodePair> region;  // R
  std::vector<NodePair> flips;   // R', a subset of R
  double p = 1.0;
  GuardPolicy guard = GuardPolicy::Enforce;

  /// r <= p n^2 / 18.
  bool feasible() const;
  /// Checks R' within R, no duplicates, p in [0,1] and, under Enforce, the
  /// feasibility guard. Throws ParameterError.
  void validate() const;
};

/// 2 exp(-p l / 40).
double adaptive_failure_bound(double p, double steps);
/// r' q^(l/r') + q l r / n^2 with q = 1 - p.
double oblivious_ar_failure_bound(double p, double steps, double r_prime,
                                  double r, double n);
/// Same union bound with whole rounds per edge and the hit rate
/// q r / binom(n,2) of uniform pair sampling. Reported for comparison.
double oblivious_ar_failure_bound_pairs(double p, double steps, double r_prime,
                                        double r, double n);

/// Adaptive adversary that flips still-needed edges of R: unflipped R' edges
/// and any R edge hit by a random change. The pending set is kept in O(1)
/// per event.
class AdaptiveEmbedder : public Adversary {
 public:
  AdaptiveEmbedder(const EmbeddingTask& task, const DynamicGraph& start);

  Proposal propose(std::uint64_t step, const DynamicGraph* realized) override;
  void observe(const DynamicGraph& before, const Change& realized) override;

  bool done() const { return pending_.empty(); }
  std::size_t pending() const { return pending_.size(); }
  std::uint64_t random_hits() const { return hits_; }
  std::uint64_t proposals_outside_region() const { return outside_; }

 private:
  void toggle(std::size_t index);

  std::vector<NodePair> region_;
  std::unordered_map<NodePair, std::size_t, NodePairHash> index_;
  std::vector<std::int64_t> position_;
  std::vector<std::size_t> pending_;
  NodePair filler_;
  bool last_was_proposal_ = false;
  NodePair last_proposal_;
  std::uint64_t hits_ = 0;
  std::uint64_t outside_ = 0;
};

struct EmbedResult {
  std::uint64_t steps_used = 0;
  bool success = false;
  std::uint64_t random_hits_on_region = 0;
};

/// Runs the adaptive embedder on `g` for at most `budget` steps, stopping as
/// soon as (G xor G_start) restricted to R equals R'. Observers see every
/// change. Verifies the final state against a shadow copy on success.
EmbedResult adaptive_embed(DynamicGraph& g, const EmbeddingTask& task,
                           std::uint64_t budget, std::uint64_t seed,
                           std::span<Observer* const> observers = {});

struct MultiphaseResult {
  std::vector<std::uint64_t> phase_steps;
  std::uint64_t total_steps = 0;
  /// Every phase finished within the per-phase cutoff.
  bool success = false;
  /// total_steps <= 12 k r_hat / p.
  bool within_budget = false;
  std::uint64_t cutoff = 0;
  double budget = 0.0;
};

/// ceil(40 (c + 2) r_hat max(1, ln k) / p).
std::uint64_t multiphase_cutoff(double p, std::uint64_t r_hat, std::uint64_t k,
                                double c);

/// Realizes the phases one after the other inside `region`.
MultiphaseResult multiphase_embed(DynamicGraph& g, std::span<const NodePair> region,
                                  std::span<const std::vector<NodePair>> phases,
                                  double p, double c, std::uint64_t seed,
                                  GuardPolicy guard = GuardPolicy::Enforce,
                                  std::span<Observer* const> observers = {});

/// Oblivious add/remove insistence: round-robin over R', proposing Add for
/// edges that should end present and Remove otherwise.
class RoundRobinInsister : public Adversary {
 public:
  RoundRobinInsister(std::vector<NodePair> edges, std::vector<bool> targets);
  Proposal propose(std::uint64_t step, const DynamicGraph* realized) override;

 private:
  std::vector<NodePair> edges_;
  std::vector<bool> targets_;
};

struct ObliviousEmbedResult {
  bool success = false;
  bool targets_reached = false;
  std::uint64_t random_hits_on_region = 0;
};

/// Runs the insister for exactly `steps` steps. Targets are the flipped
/// states of R' relative to `g` at the start.
ObliviousEmbedResult oblivious_ar_embed(DynamicGraph& g, const EmbeddingTask& task,
                                        std::uint64_t steps, std::uint64_t seed);

// --- Scripts ----------------------------------------------------------------

struct ScriptPhase {
  std::vector<NodePair> flips;
  std::string expect;
};

/// Blocks of "phase", then "flip u v" lines, then "expect <token>". Blank
/// lines and lines starting with '#' are skipped.
std::vector<ScriptPhase> parse_script(std::istream& in);
void write_script(std::ostream& out, std::span<const ScriptPhase> script);

struct PhaseRecord {
  std::size_t phase = 0;
  bool verified = false;
  std::string expected;
  std::string observed;
  std::uint64_t steps = 0;
};

struct DriverConfig {
  std::vector<NodeId> region_nodes;  // V-hat
  double p = 1.0;
  double c = 1.0;
  std::uint64_t seed = 0;
};

using QueryFn = std::function<std::string(const DynamicGraph&)>;

struct DriverResult {
  bool setup_ok = false;
  std::uint64_t setup_steps = 0;
  std::vector<PhaseRecord> phases;
  DynamicGraph graph;
};

/// Controls every pair touching V-hat. A setup embedding first empties V-hat
/// (internal edges and edges to the rest), then each script phase is realized
/// with the multi-phase embedder and `query` is recorded next to the expected
/// token. Phases whose embedding failed are marked unverified.
DriverResult scripted_phase_driver(std::span<const ScriptPhase> script,
                                   DynamicGraph g, const DriverConfig& config,
                                   const QueryFn& query,
                                   std::span<Observer* const> observers = {});

}  // namespace smoothdyn

#endif  // SMOOTHDYN_ADVERSARIES_HPP_

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

#ifndef SMOOTHDYN_SMOOTHING_HPP_
#define SMOOTHDYN_SMOOTHING_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smoothdyn/graph.hpp"
#include "smoothdyn/rng.hpp"

namespace smoothdyn {

enum class ChangeKind : std::uint8_t { Flip, Add, Remove, Null };
enum class Provenance : std::uint8_t { Adversarial, Random };
enum class AdversaryModel : std::uint8_t { ObliviousFlip, ObliviousAddRemove, Adaptive };

std::string_view to_string(ChangeKind kind);
std::string_view to_string(Provenance provenance);
std::string_view to_string(AdversaryModel model);
AdversaryModel parse_model(std::string_view name);

/// What algorithms see of a step: an edge and an operation, nothing more.
struct Change {
  ChangeKind kind = ChangeKind::Null;
  std::optional<NodePair> edge;

  static Change flip(NodePair e) { return {ChangeKind::Flip, e}; }
  static Change null() { return {}; }
  friend bool operator==(const Change&, const Change&) = default;
};

/// One logged step. Provenance is for the harness only.
struct ChangeEvent {
  std::uint64_t step = 0;
  Change change;
  Provenance provenance = Provenance::Random;
  friend bool operator==(const ChangeEvent&, const ChangeEvent&) = default;
};

/// Presence of `change.edge` after applying `change` to `before`.
bool present_after(const DynamicGraph& before, const Change& change);
/// Whether applying `change` to `before` alters the edge set.
bool is_effective(const DynamicGraph& before, const Change& change);
/// Applies `change` to `g`; returns whether the edge set changed.
bool apply_change(DynamicGraph& g, const Change& change);

struct SmoothingParams {
  double p = 1.0;
  std::uint64_t seed = 0;
  std::optional<std::vector<NodePair>> restriction;

  /// Throws ParameterError when p is outside [0,1] or the restriction is
  /// empty.
  void validate() const;
  EdgeUniverse universe(NodeId n) const;
};

struct Proposal {
  NodePair edge;
  ChangeKind action = ChangeKind::Flip;  // Flip, Add or Remove
};

/// Proposes one change per step.
///
/// Oblivious models pass `realized == nullptr`; an oblivious adversary must
/// be a function of its own seed and the step index. In the adaptive model
/// `realized` is G_{i-1} and `observe` is called with every realized change
/// before the next proposal.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual Proposal propose(std::uint64_t step, const DynamicGraph* realized) = 0;
  virtual void observe(const DynamicGraph& /*before*/, const Change& /*realized*/) {}
};

/// Generator of a p-smoothed change sequence.
///
/// The adversary is consulted every step, before the smoothing coin, so its
/// proposal stream does not depend on the coin outcomes.
class SmoothedSource {
 public:
  SmoothedSource(AdversaryModel model, SmoothingParams params, NodeId n,
                 Adversary& adversary);

  /// Draws the change for the next step. `realized` is the current graph; it
  /// is forwarded to the adversary only in the adaptive model.
  ChangeEvent next_change(const DynamicGraph& realized);
  /// Adaptive bookkeeping: tells the adversary what was applied.
  void notify_applied(const DynamicGraph& before, const Change& change);

  AdversaryModel model() const { return model_; }
  const SmoothingParams& params() const { return params_; }
  const EdgeUniverse& universe() const { return universe_; }
  std::uint64_t step() const { return step_; }

 private:
  AdversaryModel model_;
  SmoothingParams params_;
  EdgeUniverse universe_;
  Adversary& adversary_;
  Rng coins_;
  std::uint64_t step_ = 0;
};

/// Receives each change before it is applied to the shared graph.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void on_change(const DynamicGraph& before, const Change& change) = 0;
};

struct SequenceResult {
  DynamicGraph graph;
  std::vector<ChangeEvent> log;
};

/// Called after every step with the step index and the updated graph.
using StepHook = std::function<void(std::uint64_t, const DynamicGraph&)>;

SequenceResult run_sequence(DynamicGraph g0, SmoothedSource& source,
                            std::uint64_t steps,
                            std::span<Observer* const> observers,
                            const StepHook& after_step = {});

/// Each allowed pair keeps its `h0` state with probability p and is
/// otherwise redrawn as a fair coin.
DynamicGraph smooth_initial(const DynamicGraph& h0, const SmoothingParams& params,
                            Rng& rng);

void write_event_log(std::ostream& out, std::span<const ChangeEvent> log);

// --- Laziness -------------------------------------------------------------

/// An algorithm whose update procedure accepts a flip or `null`.
class LazyAlgorithm {
 public:
  virtual ~LazyAlgorithm() = default;
  virtual void update_flip(const DynamicGraph& before, NodePair e) = 0;
  virtual void update_null() = 0;
};

/// Add on a present edge and Remove on an absent edge become Null; every
/// other change becomes a Flip.
Change translate_to_lazy(const DynamicGraph& before, const Change& change);

/// Runs a lazy-model algorithm on add/remove sequences. Null steps are
/// deferred by a counter and replayed right before the next effective flip,
/// so the wrapped algorithm performs the same computation as on the lazy
/// sequence itself.
class LazyFlipAdapter : public Observer {
 public:
  explicit LazyFlipAdapter(LazyAlgorithm& inner) : inner_(inner) {}

  void on_change(const DynamicGraph& before, const Change& change) override;
  /// Feeds a flip with an explicit number of preceding nulls.
  void run_with_counter(const DynamicGraph& before, NodePair e,
                        std::uint64_t counter);
  /// Replays any deferred nulls.
  void flush();

  std::uint64_t pending_nulls() const { return counter_; }
  std::uint64_t inner_calls() const { return inner_calls_; }

 private:
  LazyAlgorithm& inner_;
  std::uint64_t counter_ = 0;
  std::uint64_t inner_calls_ = 0;
};

/// Runs a lazy-model algorithm on a non-lazy flip sequence: before each flip
/// it tosses coins with heads probability `heads` until the first head and
/// replays (tosses - 1) nulls.
class GeometricLazyDriver : public Observer {
 public:
  GeometricLazyDriver(LazyAlgorithm& inner, double heads, Rng rng);

  void on_change(const DynamicGraph& before, const Change& change) override;
  std::uint64_t tosses() const { return tosses_; }
  std::uint64_t inner_calls() const { return adapter_.inner_calls(); }

 private:
  LazyFlipAdapter adapter_;
  double heads_;
  Rng rng_;
  std::uint64_t tosses_ = 0;
};

/// p' = p / (2 - p).
double lazy_equivalent_p(double p);

/// Copies the edge choice of a flip strategy and picks Add or Remove with a
/// fair coin.
class FlipAsAddRemove : public Adversary {
 public:
  FlipAsAddRemove(Adversary& flip_strategy, Rng rng)
      : inner_(flip_strategy), rng_(rng) {}
  Proposal propose(std::uint64_t step, const DynamicGraph* realized) override;

 private:
  Adversary& inner_;
  Rng rng_;
};

struct ArSimulation {
  std::unique_ptr<Adversary> strategy;
  double p_prime;
};

ArSimulation oblivious_ar_simulating_flip(Adversary& flip_strategy, double p,
                                          Rng rng);

// --- Built-in adversaries ---------------------------------------------------

/// Uniform proposals over a universe. With `add_remove`, the action is a
/// fair Add/Remove coin.
class UniformAdversary : public Adversary {
 public:
  UniformAdversary(EdgeUniverse universe, Rng rng, bool add_remove = false)
      : universe_(std::move(universe)), rng_(rng), add_remove_(add_remove) {}
  Proposal propose(std::uint64_t step, const DynamicGraph* realized) override;

 private:
  EdgeUniverse universe_;
  Rng rng_;
  bool add_remove_;
};

/// Replays a fixed list of proposals, cycling when exhausted.
class ScriptAdversary : public Adversary {
 public:
  explicit ScriptAdversary(std::vector<Proposal> script);
  Proposal propose(std::uint64_t step, const DynamicGraph* realized) override;

 private:
  std::vector<Proposal> script_;
};

/// Proposes (hub, v) with v uniform over the other nodes.
class IncidentAdversary : public Adversary {
 public:
  IncidentAdversary(NodeId n, NodeId hub, Rng rng);
  Proposal propose(std::uint64_t step, const DynamicGraph* realized) override;

 private:
  NodeId n_;
  NodeId hub_;
  Rng rng_;
};

/// Adaptive: removes an existing edge at the hub while one exists, otherwise
/// proposes a uniform hub edge. Tries to isolate the hub.
class HubAttackAdversary : public Adversary {
 public:
  HubAttackAdversary(NodeId n, NodeId hub, Rng rng);
  Proposal propose(std::uint64_t step, const DynamicGraph* realized) override;

 private:
  NodeId n_;
  NodeId hub_;
  Rng rng_;
};

}  // namespace smoothdyn

#endif  // SMOOTHDYN_SMOOTHING_HPP_

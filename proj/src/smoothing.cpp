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

#include "smoothdyn/smoothing.hpp"

#include <ostream>
#include <string>

#include "smoothdyn/errors.hpp"

namespace smoothdyn {

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::Flip: return "flip";
    case ChangeKind::Add: return "add";
    case ChangeKind::Remove: return "remove";
    case ChangeKind::Null: return "null";
  }
  return "?";
}

std::string_view to_string(Provenance provenance) {
  return provenance == Provenance::Adversarial ? "adversarial" : "random";
}

std::string_view to_string(AdversaryModel model) {
  switch (model) {
    case AdversaryModel::ObliviousFlip: return "oblivious-flip";
    case AdversaryModel::ObliviousAddRemove: return "oblivious-ar";
    case AdversaryModel::Adaptive: return "adaptive";
  }
  return "?";
}

AdversaryModel parse_model(std::string_view name) {
  if (name == "oblivious-flip" || name == "average") {
    return AdversaryModel::ObliviousFlip;
  }
  if (name == "oblivious-ar") return AdversaryModel::ObliviousAddRemove;
  if (name == "adaptive") return AdversaryModel::Adaptive;
  throw ParameterError("unknown adversary model '" + std::string(name) + "'");
}

bool present_after(const DynamicGraph& before, const Change& change) {
  const NodePair e = change.edge.value();
  switch (change.kind) {
    case ChangeKind::Flip: return !before.has_edge(e);
    case ChangeKind::Add: return true;
    case ChangeKind::Remove: return false;
    case ChangeKind::Null: break;
  }
  return before.has_edge(e);
}

bool is_effective(const DynamicGraph& before, const Change& change) {
  if (change.kind == ChangeKind::Null) return false;
  return present_after(before, change) != before.has_edge(*change.edge);
}

bool apply_change(DynamicGraph& g, const Change& change) {
  switch (change.kind) {
    case ChangeKind::Flip: g.flip(*change.edge); return true;
    case ChangeKind::Add: return g.add(*change.edge);
    case ChangeKind::Remove: return g.remove(*change.edge);
    case ChangeKind::Null: return false;
  }
  return false;
}

void SmoothingParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("smoothing parameter p=" + std::to_string(p) +
                         " outside [0,1]");
  }
  if (restriction && restriction->empty()) {
    throw ParameterError("restriction must be nonempty when given");
  }
}

EdgeUniverse SmoothingParams::universe(NodeId n) const {
  if (!restriction) return EdgeUniverse::complete(n);
  return EdgeUniverse::restricted(n, *restriction);
}

SmoothedSource::SmoothedSource(AdversaryModel model, SmoothingParams params,
                               NodeId n, Adversary& adversary)
    : model_(model),
      params_(std::move(params)),
      adversary_(adversary),
      coins_(Rng::stream(params_.seed, streams::kSmoothing)) {
  params_.validate();
  universe_ = params_.universe(n);
  if (universe_.size() == 0) {
    throw ParameterError("no node pairs to change (n < 2)");
  }
}

ChangeEvent SmoothedSource::next_change(const DynamicGraph& realized) {
  const DynamicGraph* view =
      model_ == AdversaryModel::Adaptive ? &realized : nullptr;
  const Proposal proposal = adversary_.propose(step_, view);
  if (!universe_.contains(proposal.edge)) {
    throw ContractViolation("adversary proposed (" +
                            std::to_string(proposal.edge.u()) + "," +
                            std::to_string(proposal.edge.v()) +
                            ") outside the allowed edge set");
  }
  const bool ar = proposal.action == ChangeKind::Add ||
                  proposal.action == ChangeKind::Remove;
  if (proposal.action == ChangeKind::Null ||
      (model_ == AdversaryModel::ObliviousFlip && ar) ||
      (model_ == AdversaryModel::ObliviousAddRemove && !ar)) {
    throw ContractViolation("adversary action '" +
                            std::string(to_string(proposal.action)) +
                            "' not allowed in the " +
                            std::string(to_string(model_)) + " model");
  }

  ChangeEvent event;
  event.step = step_++;
  if (coins_.bernoulli(params_.p)) {
    event.change = {proposal.action, proposal.edge};
    event.provenance = Provenance::Adversarial;
  } else {
    event.change = Change::flip(universe_.sample(coins_));
    event.provenance = Provenance::Random;
  }
  return event;
}

void SmoothedSource::notify_applied(const DynamicGraph& before,
                                    const Change& change) {
  if (model_ == AdversaryModel::Adaptive) adversary_.observe(before, change);
}

SequenceResult run_sequence(DynamicGraph g0, SmoothedSource& source,
                            std::uint64_t steps,
                            std::span<Observer* const> observers,
                            const StepHook& after_step) {
  SequenceResult out{std::move(g0), {}};
  out.log.reserve(steps);
  for (std::uint64_t i = 0; i < steps; ++i) {
    ChangeEvent event = source.next_change(out.graph);
    for (Observer* observer : observers) {
      observer->on_change(out.graph, event.change);
    }
    source.notify_applied(out.graph, event.change);
    apply_change(out.graph, event.change);
    out.log.push_back(event);
    if (after_step) after_step(event.step, out.graph);
  }
  return out;
}

DynamicGraph smooth_initial(const DynamicGraph& h0,
                            const SmoothingParams& params, Rng& rng) {
  params.validate();
  const EdgeUniverse universe = params.universe(h0.node_count());
  if (universe.is_restricted()) {
    for (const NodePair& e : h0.edges()) {
      if (!universe.contains(e)) {
        throw ParameterError("initial graph has an edge outside the restriction");
      }
    }
  }
  DynamicGraph g(h0.node_count());
  const std::uint64_t m = universe.size();
  for (std::uint64_t i = 0; i < m; ++i) {
    const NodePair e = universe.at(i);
    const bool keep = rng.bernoulli(params.p);
    const bool present = keep ? h0.has_edge(e) : rng.bernoulli(0.5);
    if (present) g.add(e);
  }
  return g;
}

void write_event_log(std::ostream& out, std::span<const ChangeEvent> log) {
  out << "step,kind,u,v,provenance\n";
  for (const ChangeEvent& event : log) {
    out << event.step << ',' << to_string(event.change.kind) << ',';
    if (event.change.edge) {
      out << event.change.edge->u() << ',' << event.change.edge->v();
    } else {
      out << ',';
    }
    out << ',' << to_string(event.provenance) << '\n';
  }
}

// ---------------------------------------------------------------------------

Change translate_to_lazy(const DynamicGraph& before, const Change& change) {
  if (!is_effective(before, change)) return Change::null();
  return Change::flip(*change.edge);
}

void LazyFlipAdapter::on_change(const DynamicGraph& before,
                                const Change& change) {
  const Change lazy = translate_to_lazy(before, change);
  if (lazy.kind == ChangeKind::Null) {
    ++counter_;
    return;
  }
  run_with_counter(before, *lazy.edge, counter_);
}

void LazyFlipAdapter::run_with_counter(const DynamicGraph& before, NodePair e,
                                       std::uint64_t counter) {
  for (std::uint64_t i = 0; i < counter; ++i) inner_.update_null();
  inner_.update_flip(before, e);
  inner_calls_ += counter + 1;
  counter_ = 0;
}

void LazyFlipAdapter::flush() {
  for (; counter_ > 0; --counter_) {
    inner_.update_null();
    ++inner_calls_;
  }
}

GeometricLazyDriver::GeometricLazyDriver(LazyAlgorithm& inner, double heads,
                                         Rng rng)
    : adapter_(inner), heads_(heads), rng_(rng) {
  if (!(heads > 0.0 && heads <= 1.0)) {
    throw ParameterError("heads probability must lie in (0,1]");
  }
}

void GeometricLazyDriver::on_change(const DynamicGraph& before,
                                    const Change& change) {
  if (!is_effective(before, change)) return;
  std::uint64_t tosses = 1;
  while (!rng_.bernoulli(heads_)) ++tosses;
  tosses_ += tosses;
  adapter_.run_with_counter(before, *change.edge, tosses - 1);
}

double lazy_equivalent_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p outside [0,1]");
  return p / (2.0 - p);
}

Proposal FlipAsAddRemove::propose(std::uint64_t step,
                                  const DynamicGraph* realized) {
  Proposal proposal = inner_.propose(step, realized);
  proposal.action = rng_.bernoulli(0.5) ? ChangeKind::Add : ChangeKind::Remove;
  return proposal;
}

ArSimulation oblivious_ar_simulating_flip(Adversary& flip_strategy, double p,
                                          Rng rng) {
  return {std::make_unique<FlipAsAddRemove>(flip_strategy, rng),
          lazy_equivalent_p(p)};
}

// ---------------------------------------------------------------------------

Proposal UniformAdversary::propose(std::uint64_t, const DynamicGraph*) {
  Proposal proposal{universe_.sample(rng_)};
  if (add_remove_) {
    proposal.action = rng_.bernoulli(0.5) ? ChangeKind::Add : ChangeKind::Remove;
  }
  return proposal;
}

ScriptAdversary::ScriptAdversary(std::vector<Proposal> script)
    : script_(std::move(script)) {
  if (script_.empty()) throw ParameterError("adversary script is empty");
}

Proposal ScriptAdversary::propose(std::uint64_t step, const DynamicGraph*) {
  return script_[step % script_.size()];
}

IncidentAdversary::IncidentAdversary(NodeId n, NodeId hub, Rng rng)
    : n_(n), hub_(hub), rng_(rng) {
  if (n < 2 || hub >= n) throw ParameterError("bad hub for incident adversary");
}

Proposal IncidentAdversary::propose(std::uint64_t, const DynamicGraph*) {
  auto v = static_cast<NodeId>(rng_.bounded(n_ - 1));
  if (v >= hub_) ++v;
  return {NodePair(hub_, v)};
}

HubAttackAdversary::HubAttackAdversary(NodeId n, NodeId hub, Rng rng)
    : n_(n), hub_(hub), rng_(rng) {
  if (n < 2 || hub >= n) throw ParameterError("bad hub for hub attack");
}

Proposal HubAttackAdversary::propose(std::uint64_t, const DynamicGraph* realized) {
  if (realized != nullptr && realized->degree(hub_) > 0) {
    return {NodePair(hub_, *realized->neighbors(hub_).begin())};
  }
  auto v = static_cast<NodeId>(rng_.bounded(n_ - 1));
  if (v >= hub_) ++v;
  return {NodePair(hub_, v)};
}

}  // namespace smoothdyn

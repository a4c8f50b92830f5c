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

#include "smoothdyn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "smoothdyn/oracles.hpp"
#include "smoothdyn/poisson.hpp"
#include "smoothdyn/stats.hpp"

namespace smoothdyn {

namespace {

const std::set<std::string>& decider_problems() {
  static const std::set<std::string> names = {
      "connectivity-trivial",          "connectivity-hybrid",
      "bip-perfect-matching-trivial",  "bip-perfect-matching-hybrid",
      "bip-max-matching-trivial",      "bip-max-matching-hybrid",
      "bip-min-vertex-cover-trivial",  "bip-min-vertex-cover-hybrid"};
  return names;
}

bool is_counter_problem(const std::string& name) {
  try {
    parse_counter_problem(name);
    return true;
  } catch (const ParameterError&) {
    return false;
  }
}

DecisionProblem decision_problem_of(const std::string& name) {
  if (name.starts_with("connectivity")) return DecisionProblem::Connectivity;
  if (name.starts_with("bip-perfect-matching")) return DecisionProblem::BipPerfectMatching;
  if (name.starts_with("bip-max-matching")) return DecisionProblem::BipMaxMatching;
  return DecisionProblem::BipMinVertexCover;
}

[[noreturn]] void field_error(std::string_view field, const std::string& what) {
  throw ConfigError("field '" + std::string(field) + "': " + what);
}

}  // namespace

void ExperimentConfig::validate() const {
  static const std::set<std::string> adversaries = {"uniform", "incident", "hub-attack"};
  static const std::set<std::string> modes = {"sol", "p3general", "omv-chain", "histogram"};
  static const std::set<std::string> counters = {"exact", "incremental", "pack"};
  const bool counter_problem = is_counter_problem(problem);
  if (!counter_problem && !decider_problems().contains(problem) && problem != "embedding") {
    field_error("problem", "unknown problem \"" + problem + "\"");
  }
  AdversaryModel parsed_model{};
  try {
    parsed_model = parse_model(model);
  } catch (const ParameterError& e) {
    field_error("model", e.what());
  }
  if (n < 2) field_error("n", "need at least 2 nodes");
  if (p_grid.empty()) field_error("p", "grid is empty");
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) field_error("p", "value " + format_decimal(p) + " outside [0, 1]");
  }
  if (trials < 1) field_error("trials", "must be at least 1");
  if (threads < 1) field_error("threads", "must be at least 1");
  if (!adversaries.contains(adversary)) {
    field_error("adversary", "expected uniform, incident or hub-attack");
  }
  if (adversary == "hub-attack" && parsed_model != AdversaryModel::Adaptive) {
    field_error("adversary", "hub-attack needs the adaptive model");
  }
  if (!modes.contains(mode)) {
    field_error("mode", "expected sol, p3general, omv-chain or histogram");
  }
  if (!counters.contains(counter)) field_error("counter", "expected exact, incremental or pack");
  if (counter_problem && query_every > 0 && n > kOracleNodeCap) {
    field_error("n", "oracle comparison needs n <= " + std::to_string(kOracleNodeCap) +
                         " (set query_every to 0)");
  }
  if (repetitions < 1) field_error("repetitions", "must be at least 1");
  if (flips > region) field_error("flips", "exceeds region");
}

namespace {

using nlohmann::json;

std::uint64_t as_uint(std::string_view key, const json& value) {
  if (!value.is_number_integer() || (value.is_number_integer() && value.get<long long>() < 0 &&
                                     !value.is_number_unsigned())) {
    field_error(key, "expected a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

double as_double(std::string_view key, const json& value) {
  if (!value.is_number()) field_error(key, "expected a number");
  return value.get<double>();
}

std::string as_string(std::string_view key, const json& value) {
  if (!value.is_string()) field_error(key, "expected a string");
  return value.get<std::string>();
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(std::string(origin) + ":" + std::to_string(line) + ":" +
                      std::to_string(column) + ": syntax error");
  }
  if (!doc.is_object()) throw ConfigError(std::string(origin) + ": expected a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "problem") {
      c.problem = as_string(key, value);
    } else if (key == "model") {
      c.model = as_string(key, value);
    } else if (key == "n") {
      c.n = static_cast<NodeId>(as_uint(key, value));
    } else if (key == "p" || key == "p_grid") {
      c.p_grid.clear();
      if (value.is_array()) {
        for (const auto& x : value) c.p_grid.push_back(as_double(key, x));
      } else {
        c.p_grid.push_back(as_double(key, value));
      }
    } else if (key == "T" || key == "steps") {
      c.steps = as_uint(key, value);
    } else if (key == "trials") {
      c.trials = as_uint(key, value);
    } else if (key == "seed") {
      c.seed = as_uint(key, value);
    } else if (key == "out") {
      c.out = as_string(key, value);
    } else if (key == "adversary") {
      c.adversary = as_string(key, value);
    } else if (key == "query_every") {
      c.query_every = as_uint(key, value);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(as_uint(key, value));
    } else if (key == "mode") {
      c.mode = as_string(key, value);
    } else if (key == "counter") {
      c.counter = as_string(key, value);
    } else if (key == "instances") {
      c.instances = as_uint(key, value);
    } else if (key == "repetitions") {
      c.repetitions = static_cast<int>(as_uint(key, value));
    } else if (key == "region") {
      c.region = as_uint(key, value);
    } else if (key == "flips") {
      c.flips = as_uint(key, value);
    } else if (key == "budget") {
      c.budget = as_uint(key, value);
    } else {
      throw ConfigError(std::string(origin) + ": unknown field '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string format_decimal(double value) {
  if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

void write_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << kCsvHeader << '\n';
  for (const MetricRow& row : rows) {
    out << (row.trial < 0 ? std::string("all") : std::to_string(row.trial)) << ','
        << format_decimal(row.p) << ',' << row.n << ',' << row.steps << ',' << row.problem
        << ',' << row.model << ',' << row.metric << ',' << format_decimal(row.value) << '\n';
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return Rng::stream(seed, streams::kTrialBase + index).next();
}

std::vector<MetricRow> run_ordered(
    std::size_t count, unsigned threads,
    const std::function<std::vector<MetricRow>(std::size_t)>& job) {
  std::vector<std::vector<MetricRow>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        results[k] = job(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, count));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  std::vector<MetricRow> rows;
  for (auto& part : results) {
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return rows;
}

// --- Experiment primitives ---------------------------------------------------

double CounterTrialResult::expensive_fraction() const {
  return steps == 0 ? 0.0 : static_cast<double>(expensive) / static_cast<double>(steps);
}

double CounterTrialResult::mean_ops() const {
  return steps == 0 ? 0.0 : static_cast<double>(ops) / static_cast<double>(steps);
}

double expected_expensive_fraction(double p, NodeId n) {
  const double nn = static_cast<double>(n);
  return p + (1.0 - p) * 2.0 * nn / static_cast<double>(binom2(n));
}

namespace {

std::uint64_t counter_oracle(CounterProblem problem, const DynamicGraph& g) {
  const NodeId t = g.node_count() - 1;
  switch (problem) {
    case CounterProblem::ST2: return bf_st_paths(g, 0, t, 2);
    case CounterProblem::ST3: return bf_st_paths(g, 0, t, 3);
    case CounterProblem::ST4: return bf_st_paths(g, 0, t, 4);
    case CounterProblem::STriangle: return bf_s_cycles(g, 0, 3);
    case CounterProblem::S4Cycle: return bf_s_cycles(g, 0, 4);
  }
  throw InvariantViolation("unknown counter problem");
}

/// Owns the adversary chain for one run.
struct AdversaryStack {
  std::unique_ptr<Adversary> base;
  std::unique_ptr<Adversary> wrapper;
  Adversary& top() { return wrapper ? *wrapper : *base; }
};

AdversaryStack make_adversary(const std::string& name, AdversaryModel model, NodeId n,
                              std::uint64_t seed) {
  AdversaryStack stack;
  Rng rng = Rng::stream(seed, streams::kAdversary);
  const bool ar = model == AdversaryModel::ObliviousAddRemove;
  if (name == "uniform") {
    stack.base = std::make_unique<UniformAdversary>(EdgeUniverse::complete(n), rng, ar);
    return stack;
  }
  if (name == "incident") {
    stack.base = std::make_unique<IncidentAdversary>(n, 0, rng);
  } else if (name == "hub-attack") {
    if (model != AdversaryModel::Adaptive) {
      throw ParameterError("hub-attack needs the adaptive model");
    }
    stack.base = std::make_unique<HubAttackAdversary>(n, 0, rng);
  } else {
    throw ParameterError("unknown adversary " + name);
  }
  if (ar) stack.wrapper = std::make_unique<FlipAsAddRemove>(*stack.base, rng.split(1));
  return stack;
}

}  // namespace

CounterTrialResult counter_trial(const CounterTrialSpec& spec) {
  Rng init = Rng::stream(spec.seed, streams::kInitialGraph);
  SmoothingParams params{spec.p, spec.seed, std::nullopt};
  const DynamicGraph h0 = random_graph(spec.n, init);
  const DynamicGraph g0 = smooth_initial(h0, params, init);
  auto counter = make_counter(spec.problem, spec.n, 0, spec.n - 1, spec.st4);
  counter->preprocess(g0);
  counter->reset_stats();

  AdversaryStack adversary = make_adversary(spec.adversary, spec.model, spec.n, spec.seed);
  SmoothedSource source(spec.model, params, spec.n, adversary.top());
  CounterTrialResult result;
  result.steps = spec.steps;
  std::uint64_t done = 0;
  const auto hook = [&](std::uint64_t, const DynamicGraph& g) {
    ++done;
    if (spec.query_every == 0 || done % spec.query_every != 0) return;
    ++result.queries;
    if (counter->query() != counter_oracle(spec.problem, g)) ++result.mismatches;
  };
  Observer* observers[] = {counter.get()};
  const auto start = std::chrono::steady_clock::now();
  run_sequence(g0, source, spec.steps, observers, hook);
  const auto stop = std::chrono::steady_clock::now();
  result.wall_ns =
      static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  result.updates = counter->stats().updates;
  result.expensive = counter->stats().expensive;
  result.ops = counter->stats().ops;
  return result;
}

double DeciderTrialResult::error_rate() const {
  return queries == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(queries);
}

namespace {

/// Keeps the exact answer of a decision problem under effective changes.
class ExactTracker : public Observer {
 public:
  ExactTracker(DecisionProblem problem, const DynamicGraph& g0, NodeId side)
      : problem_(problem) {
    if (problem == DecisionProblem::Connectivity) {
      dense_.emplace(g0);
    } else {
      matching_.emplace(g0, side, g0.node_count() - side);
    }
  }

  void on_change(const DynamicGraph& before, const Change& change) override {
    if (!is_effective(before, change)) return;
    const bool present = present_after(before, change);
    if (dense_) dense_->set(*change.edge, present);
    if (matching_) matching_->set(*change.edge, present);
  }

  std::int64_t answer() const {
    switch (problem_) {
      case DecisionProblem::Connectivity: return dense_->connected() ? 1 : 0;
      case DecisionProblem::BipPerfectMatching: return matching_->perfect() ? 1 : 0;
      case DecisionProblem::BipMaxMatching:
      case DecisionProblem::BipMinVertexCover:
        return static_cast<std::int64_t>(matching_->size());
    }
    return 0;
  }

 private:
  DecisionProblem problem_;
  std::optional<DenseAdjacency> dense_;
  std::optional<IncrementalMatching> matching_;
};

}  // namespace

DeciderTrialResult decider_trial(DecisionProblem problem, bool hybrid, NodeId n, double p,
                                 std::uint64_t steps, std::uint64_t seed) {
  const bool bipartite = problem != DecisionProblem::Connectivity;
  const NodeId side = bipartite ? n / 2 : n;
  SmoothingParams params{p, seed, std::nullopt};
  std::vector<NodePair> incident;
  if (bipartite) {
    std::vector<NodePair> cross;
    for (NodeId i = 0; i < side; ++i) {
      for (NodeId j = side; j < n; ++j) cross.emplace_back(i, j);
    }
    params.restriction = std::move(cross);
    for (NodeId j = side; j < n; ++j) incident.emplace_back(0, j);
  } else {
    for (NodeId v = 1; v < n; ++v) incident.emplace_back(0, v);
  }
  Rng init = Rng::stream(seed, streams::kInitialGraph);
  const DynamicGraph g0 = smooth_initial(DynamicGraph(n), params, init);
  UniformAdversary adversary(EdgeUniverse::restricted(n, incident),
                             Rng::stream(seed, streams::kAdversary));
  SmoothedSource source(AdversaryModel::ObliviousFlip, params, n, adversary);

  std::unique_ptr<Decider> decider;
  if (hybrid) {
    decider = std::make_unique<HybridDecider>(problem, p, n, side);
  } else {
    decider = std::make_unique<TrivialDecider>(problem, side);
  }
  ExactTracker exact(problem, g0, side);
  DeciderTrialResult result;
  const auto hook = [&](std::uint64_t, const DynamicGraph& g) {
    ++result.queries;
    if (decider->query(g) != exact.answer()) ++result.errors;
  };
  Observer* observers[] = {&exact, decider.get()};
  run_sequence(g0, source, steps, observers, hook);
  return result;
}

EmbeddingTask random_embedding_task(NodeId n, std::uint64_t region, std::uint64_t flips,
                                    double p, Rng& rng) {
  const std::uint64_t m = pair_count(n);
  if (region > m) throw ParameterError("region larger than the pair count");
  // Partial Fisher-Yates over pair indices.
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  EmbeddingTask task;
  task.n = n;
  task.p = p;
  for (std::uint64_t i = 0; i < region; ++i) {
    const std::uint64_t j = i + rng.bounded(m - i);
    const auto at = [&](std::uint64_t k) {
      const auto it = swapped.find(k);
      return it == swapped.end() ? k : it->second;
    };
    const std::uint64_t pick = at(j);
    swapped[j] = at(i);
    task.region.push_back(pair_from_index(pick));
  }
  task.flips.assign(task.region.begin(),
                    task.region.begin() + static_cast<std::ptrdiff_t>(flips));
  return task;
}

P3GeneralResult p3general_trial(const P3GeneralSpec& spec) {
  const P3Layout layout(spec.n);
  Rng init = Rng::stream(spec.seed, streams::kInitialGraph);
  DynamicGraph g0(layout.node_count());
  for (const NodePair& e : layout.interior_pairs()) {
    if (init.bernoulli(0.5)) g0.add(e);
  }
  SixteenPack pack(layout, spec.p, g0, incremental_st3_factory(), spec.seed, spec.pack);
  P3GeneralResult result;
  const auto check = [&](const SixteenPack& current) {
    ++result.partition_checks;
    if (auto defect = current.partition_defect()) {
      if (result.partition_failures++ == 0) result.first_defect = *defect;
    }
  };
  if (spec.check_every_step) {
    check(pack);
    pack.set_step_hook(check);
  }
  const DAdvP dadv(spec.p, spec.n);
  Rng sequence = Rng::stream(spec.seed, streams::kAdversary);
  for (std::uint64_t step = 1; step <= spec.steps; ++step) {
    pack.feed(dadv.sample(layout, sequence));
    if (spec.query_every == 0 || step % spec.query_every != 0) continue;
    ++result.queries;
    try {
      const Recombination r = pack.recombine();
      if (r.count != bf_st_paths(pack.interior_graph(), layout.s(), layout.t(), 3)) {
        ++result.mismatches;
      }
    } catch (const InvariantViolation&) {
      ++result.non_divisible;
    }
  }
  result.total_steps = pack.total_steps();
  return result;
}

St3Factory st3_factory_named(const std::string& name, double p) {
  if (name == "exact") return exact_st3_factory();
  if (name == "incremental") return incremental_st3_factory();
  if (name == "pack") return pack_st3_factory(p, incremental_st3_factory());
  throw ParameterError("unknown st3 counter " + name);
}

SolExperiment sol_experiment(NodeId n, double p, std::uint64_t instances,
                             const St3Factory& factory, std::uint64_t seed) {
  SolExperiment out;
  out.instances = instances;
  for (std::uint64_t i = 0; i < instances; ++i) {
    Rng rng = Rng::stream(seed, streams::kTrialBase + i);
    const OuMvInstance instance = OuMvInstance::random(n, rng);
    const SolReport report = sol_solve(instance, p, factory, trial_seed(seed, i));
    out.rounds += report.answers.size();
    out.errors += report.errors;
    out.instance_error_rates.push_back(report.error_rate());
    out.max_instance_error_rate = std::max(out.max_instance_error_rate, report.error_rate());
  }
  return out;
}

OmvChainResult omv_chain_experiment(std::size_t n, std::uint64_t trials, int repetitions,
                                    std::uint64_t seed) {
  OmvChainResult out;
  out.trials = trials;
  Rng rng = Rng::stream(seed, streams::kSequence);
  const ParitySolver exact = [](const BitMatrix& m, const BitVector& u, const BitVector& v) {
    return f2_oumv_oracle(m, u, v);
  };
  for (std::uint64_t k = 0; k < trials; ++k) {
    const BitMatrix m = BitMatrix::random(n, rng);
    const BitVector u = random_bits(n, rng);
    const BitVector v = random_bits(n, rng);
    const bool exists = integer_oumv(m, u, v) > 0;
    const bool answer = omv_parity_reduction(m, u, v, exact, repetitions, rng);
    if (answer && !exists) ++out.false_positives;
    if (!answer && exists) ++out.false_negatives;
    if (worstcase_to_average_split(m, u, v, exact, rng) != f2_oumv_oracle(m, u, v)) {
      ++out.split_mismatches;
    }
  }
  return out;
}

// --- Commands ----------------------------------------------------------------

namespace {

MetricRow row_of(const ExperimentConfig& c, std::int64_t trial, double p,
                 std::string metric, double value) {
  return {trial, p, c.n, c.steps, c.problem, c.model, std::move(metric), value};
}

RunOutput split_timing(std::vector<MetricRow> rows) {
  RunOutput out;
  for (auto& row : rows) {
    (row.metric == "amortized_ns" ? out.timing : out.rows).push_back(std::move(row));
  }
  return out;
}

std::vector<MetricRow> simulate_job(const ExperimentConfig& c, double p, std::int64_t trial,
                                    std::uint64_t seed) {
  std::vector<MetricRow> rows;
  if (is_counter_problem(c.problem)) {
    CounterTrialSpec spec;
    spec.problem = parse_counter_problem(c.problem);
    spec.model = parse_model(c.model);
    spec.adversary = c.adversary;
    spec.n = c.n;
    spec.p = p;
    spec.steps = c.steps;
    spec.seed = seed;
    spec.query_every = c.query_every;
    const CounterTrialResult r = counter_trial(spec);
    if (r.queries > 0) {
      rows.push_back(row_of(c, trial, p, "error_rate",
                            static_cast<double>(r.mismatches) / static_cast<double>(r.queries)));
    }
    rows.push_back(row_of(c, trial, p, "expensive_frac", r.expensive_fraction()));
    rows.push_back(row_of(c, trial, p, "mean_ops", r.mean_ops()));
    rows.push_back(row_of(c, trial, p, "amortized_ns",
                          c.steps == 0 ? 0.0 : r.wall_ns / static_cast<double>(c.steps)));
  } else if (c.problem == "embedding") {
    Rng rng = Rng::stream(seed, streams::kInitialGraph);
    const EmbeddingTask task = random_embedding_task(c.n, c.region, c.flips, p, rng);
    DynamicGraph g = random_graph(c.n, rng);
    const AdversaryModel model = parse_model(c.model);
    const double r_prime = static_cast<double>(c.flips);
    const double budget = static_cast<double>(c.budget);
    if (model == AdversaryModel::Adaptive) {
      const EmbedResult r = adaptive_embed(g, task, c.budget, seed);
      rows.push_back(row_of(c, trial, p, "steps_used", static_cast<double>(r.steps_used)));
      rows.push_back(row_of(c, trial, p, "success", r.success ? 1.0 : 0.0));
      rows.push_back(row_of(c, trial, p, "bound", adaptive_failure_bound(p, budget)));
    } else if (model == AdversaryModel::ObliviousAddRemove) {
      const ObliviousEmbedResult r = oblivious_ar_embed(g, task, c.budget, seed);
      rows.push_back(row_of(c, trial, p, "success", r.success ? 1.0 : 0.0));
      rows.push_back(row_of(c, trial, p, "bound",
                            oblivious_ar_failure_bound(p, budget, r_prime,
                                                       static_cast<double>(c.region),
                                                       static_cast<double>(c.n))));
    } else {
      throw ConfigError("field 'model': embedding needs adaptive or oblivious-ar");
    }
  } else {
    const bool hybrid = c.problem.ends_with("hybrid");
    const DeciderTrialResult r =
        decider_trial(decision_problem_of(c.problem), hybrid, c.n, p, c.steps, seed);
    rows.push_back(row_of(c, trial, p, "error_rate", r.error_rate()));
  }
  return rows;
}

}  // namespace

RunOutput cmd_simulate(const ExperimentConfig& config) {
  config.validate();
  const std::size_t jobs = config.p_grid.size() * config.trials;
  auto rows = run_ordered(jobs, config.threads, [&](std::size_t k) {
    const double p = config.p_grid[k / config.trials];
    const auto trial = static_cast<std::int64_t>(k % config.trials);
    return simulate_job(config, p, trial, trial_seed(config.seed, k));
  });
  return split_timing(std::move(rows));
}

RunOutput cmd_bench(const ExperimentConfig& config) {
  config.validate();
  if (!is_counter_problem(config.problem)) {
    throw ConfigError("field 'problem': bench needs a counting problem");
  }
  const std::size_t jobs = config.p_grid.size() * config.trials;
  std::vector<CounterTrialResult> results(jobs);
  auto rows = run_ordered(jobs, config.threads, [&](std::size_t k) {
    const double p = config.p_grid[k / config.trials];
    CounterTrialSpec spec;
    spec.problem = parse_counter_problem(config.problem);
    spec.model = parse_model(config.model);
    spec.adversary = config.adversary;
    spec.n = config.n;
    spec.p = p;
    spec.steps = config.steps;
    spec.seed = trial_seed(config.seed, k);
    spec.query_every = 0;
    results[k] = counter_trial(spec);
    const auto trial = static_cast<std::int64_t>(k % config.trials);
    const CounterTrialResult& r = results[k];
    return std::vector<MetricRow>{
        row_of(config, trial, p, "expensive_frac", r.expensive_fraction()),
        row_of(config, trial, p, "mean_ops", r.mean_ops()),
        row_of(config, trial, p, "amortized_ns",
               config.steps == 0 ? 0.0 : r.wall_ns / static_cast<double>(config.steps))};
  });
  for (std::size_t g = 0; g < config.p_grid.size(); ++g) {
    const double p = config.p_grid[g];
    std::vector<double> fractions;
    std::vector<double> ops;
    for (std::size_t k = g * config.trials; k < (g + 1) * config.trials; ++k) {
      fractions.push_back(results[k].expensive_fraction());
      ops.push_back(results[k].mean_ops());
    }
    const MeanSe f = mean_and_se(fractions);
    const MeanSe o = mean_and_se(ops);
    rows.push_back(row_of(config, -1, p, "expensive_frac", f.mean));
    rows.push_back(row_of(config, -1, p, "expensive_frac_se", f.se));
    rows.push_back(row_of(config, -1, p, "mean_ops", o.mean));
    rows.push_back(row_of(config, -1, p, "mean_ops_se", o.se));
    rows.push_back(
        row_of(config, -1, p, "expected_expensive_frac", expected_expensive_fraction(p, config.n)));
  }
  return split_timing(std::move(rows));
}

RunOutput cmd_reduce(const ExperimentConfig& config) {
  config.validate();
  ExperimentConfig c = config;
  c.problem = config.mode;
  c.model = config.mode == "sol" ? config.counter : "-";
  RunOutput out;
  if (config.mode == "sol") {
    for (double p : config.p_grid) {
      const SolExperiment e = sol_experiment(config.n, p, config.instances,
                                             st3_factory_named(config.counter, p), config.seed);
      for (std::size_t i = 0; i < e.instance_error_rates.size(); ++i) {
        out.rows.push_back(
            row_of(c, static_cast<std::int64_t>(i), p, "error_rate", e.instance_error_rates[i]));
      }
      out.rows.push_back(row_of(c, -1, p, "disagreements", static_cast<double>(e.errors)));
      out.rows.push_back(row_of(c, -1, p, "max_error_rate", e.max_instance_error_rate));
      // The bundled counters are deterministic; only an approximate one may err.
      out.passed = out.passed && e.errors == 0;
    }
  } else if (config.mode == "p3general") {
    for (double p : config.p_grid) {
      const auto rows = run_ordered(config.trials, config.threads, [&](std::size_t k) {
        P3GeneralSpec spec;
        spec.n = config.n;
        spec.p = p;
        spec.steps = config.steps;
        spec.query_every = config.query_every == 0 ? 25 : config.query_every;
        spec.seed = trial_seed(config.seed, k);
        const P3GeneralResult r = p3general_trial(spec);
        const auto t = static_cast<std::int64_t>(k);
        return std::vector<MetricRow>{
            row_of(c, t, p, "mismatches", static_cast<double>(r.mismatches)),
            row_of(c, t, p, "non_divisible", static_cast<double>(r.non_divisible)),
            row_of(c, t, p, "partition_failures", static_cast<double>(r.partition_failures)),
            row_of(c, t, p, "success",
                   r.mismatches + r.non_divisible + r.partition_failures == 0 ? 1.0 : 0.0)};
      });
      for (const auto& row : rows) {
        if (row.metric == "success" && row.value != 1.0) out.passed = false;
      }
      out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }
  } else if (config.mode == "omv-chain") {
    const OmvChainResult r =
        omv_chain_experiment(config.n, config.instances, config.repetitions, config.seed);
    out.rows.push_back(row_of(c, -1, 0.0, "false_positives", static_cast<double>(r.false_positives)));
    out.rows.push_back(row_of(c, -1, 0.0, "false_negatives", static_cast<double>(r.false_negatives)));
    out.rows.push_back(row_of(c, -1, 0.0, "split_mismatches", static_cast<double>(r.split_mismatches)));
    out.passed = r.false_positives == 0 && r.false_negatives == 0 && r.split_mismatches == 0;
  } else {
    for (double p : config.p_grid) {
      const HistogramCheck h = dadvp_verify_histogram(p, config.n, config.instances, config.seed);
      out.rows.push_back(row_of(c, -1, p, "chi2_stat", h.types.statistic));
      out.rows.push_back(row_of(c, -1, p, "chi2_p_value", h.types.p_value));
      out.rows.push_back(row_of(c, -1, p, "length_chi2_stat", h.lengths.statistic));
      out.rows.push_back(row_of(c, -1, p, "length_chi2_p_value", h.lengths.p_value));
      out.passed = out.passed && h.passes(1e-3);
    }
  }
  return out;
}

// --- Verify ------------------------------------------------------------------

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

namespace {

SuiteResult suite_counters(const VerifyOptions& options) {
  SuiteResult s{"counters", true, ""};
  std::uint64_t queries = 0;
  for (auto problem : {CounterProblem::ST2, CounterProblem::ST3, CounterProblem::ST4,
                       CounterProblem::STriangle, CounterProblem::S4Cycle}) {
    for (auto model : {AdversaryModel::ObliviousFlip, AdversaryModel::ObliviousAddRemove,
                       AdversaryModel::Adaptive}) {
      for (double p : {0.0, 0.5, 1.0}) {
        CounterTrialSpec spec;
        spec.problem = problem;
        spec.model = model;
        spec.adversary = model == AdversaryModel::Adaptive ? "hub-attack" : "uniform";
        spec.n = 10;
        spec.p = p;
        spec.steps = 300;
        spec.seed = 17;
        spec.st4.degenerate_fault = options.st4_fault;
        const CounterTrialResult r = counter_trial(spec);
        queries += r.queries;
        if (r.mismatches > 0 && s.passed) {
          s.passed = false;
          s.detail = std::string(to_string(problem)) + " under " +
                     std::string(to_string(model)) + " at p=" + format_decimal(p) + ": " +
                     std::to_string(r.mismatches) + " mismatches";
        }
      }
    }
  }
  if (s.passed) s.detail = std::to_string(queries) + " queries agree with the oracle";
  return s;
}

SuiteResult suite_deciders() {
  SuiteResult s{"deciders", true, ""};
  for (auto problem : {DecisionProblem::Connectivity, DecisionProblem::BipPerfectMatching,
                       DecisionProblem::BipMaxMatching}) {
    const DeciderTrialResult r = decider_trial(problem, true, 8, 0.5, 200, 5);
    if (r.errors > 0) {
      s.passed = false;
      s.detail = std::string(to_string(problem)) + ": exact phase disagrees";
    }
  }
  if (s.passed) s.detail = "hybrid exact phase agrees with incremental oracles";
  return s;
}

SuiteResult suite_embedding() {
  SuiteResult s{"embedding", true, ""};
  Rng rng = Rng::stream(23, streams::kInitialGraph);
  for (int trial = 0; trial < 20; ++trial) {
    const EmbeddingTask task = random_embedding_task(30, 40, 6, 1.0, rng);
    DynamicGraph g = random_graph(30, rng);
    const EmbedResult r = adaptive_embed(g, task, 100, trial_seed(23, trial));
    if (!r.success || r.steps_used != 6) {
      s.passed = false;
      s.detail = "p=1 embedding did not finish in exactly r' steps";
      return s;
    }
  }
  s.detail = "p=1 embeddings use exactly r' steps";
  return s;
}

SuiteResult suite_poisson() {
  SuiteResult s{"poisson", true, ""};
  Rng rng = Rng::stream(29, streams::kSequence);
  std::uint64_t even = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) even += poisson_sample(1.0, rng) % 2 == 0;
  const double mass = static_cast<double>(even) / draws;
  if (std::fabs(mass - poisson_even_mass(1.0)) > 0.02) {
    s.passed = false;
    s.detail = "even mass " + format_decimal(mass);
    return s;
  }
  for (int i = 0; i < 2000; ++i) {
    const bool odd = i % 2 == 1;
    if ((poisson_parity_conditional(0.7, odd, rng) % 2 == 1) != odd) {
      s.passed = false;
      s.detail = "parity-conditional draw has the wrong parity";
      return s;
    }
  }
  s.detail = "even mass " + format_decimal(mass);
  return s;
}

SuiteResult suite_dadv() {
  SuiteResult s{"dadv-mass", true, ""};
  using Q = boost::rational<long long>;
  for (long long n : {1, 2, 8, 50}) {
    for (Q p : {Q(0), Q(1, 4), Q(1, 2), Q(1)}) {
      const AlphaExact a = alpha_of_exact(p, n);
      if (DAdvP::total_mass(p, n) != Q(1) || a.alpha < Q(1, 2) || a.alpha > Q(1)) {
        s.passed = false;
        s.detail = "mass or alpha out of range at n=" + std::to_string(n);
        return s;
      }
    }
  }
  s.detail = "masses are exactly 1, alpha within [1/2, 1]";
  return s;
}

SuiteResult suite_sol() {
  SuiteResult s{"sol", true, ""};
  for (const char* counter : {"exact", "incremental"}) {
    const SolExperiment e = sol_experiment(6, 0.5, 4, st3_factory_named(counter, 0.5), 31);
    if (e.errors > 0) {
      s.passed = false;
      s.detail = std::string(counter) + ": " + std::to_string(e.errors) + " disagreements";
      return s;
    }
  }
  s.detail = "all rounds match the F2 oracle";
  return s;
}

SuiteResult suite_p3general(const VerifyOptions& options) {
  SuiteResult s{"p3general", true, ""};
  P3GeneralSpec spec;
  spec.n = 4;
  spec.steps = 200;
  spec.query_every = 10;
  spec.seed = 37;
  if (options.pack_fault) spec.pack.skip_graph = 5;
  const P3GeneralResult r = p3general_trial(spec);
  if (r.partition_failures > 0) {
    s.passed = false;
    s.detail = "proper partition lost: " + r.first_defect;
  } else if (r.mismatches + r.non_divisible > 0) {
    s.passed = false;
    s.detail = "recombination failed at " + std::to_string(r.mismatches + r.non_divisible) +
               " queries";
  } else {
    s.detail = std::to_string(r.queries) + " queries recovered exactly";
  }
  return s;
}

SuiteResult suite_omv() {
  SuiteResult s{"omv-chain", true, ""};
  const OmvChainResult r = omv_chain_experiment(5, 200, 20, 41);
  s.passed = r.false_positives == 0 && r.false_negatives == 0 && r.split_mismatches == 0;
  s.detail = "fp=" + std::to_string(r.false_positives) +
             " fn=" + std::to_string(r.false_negatives) +
             " split=" + std::to_string(r.split_mismatches);
  return s;
}

SuiteResult suite_graph_io() {
  SuiteResult s{"graph-io", true, ""};
  Rng rng = Rng::stream(43, streams::kInitialGraph);
  const DynamicGraph g = random_graph(12, rng);
  std::stringstream buffer;
  write_edge_list(buffer, g);
  if (!(read_edge_list(buffer) == g)) {
    s.passed = false;
    s.detail = "edge-list round trip changed the graph";
    return s;
  }
  Rng orng = Rng::stream(43, streams::kSequence);
  const OuMvInstance instance = OuMvInstance::random(5, orng);
  std::stringstream oumv;
  write_oumv(oumv, instance);
  const OuMvInstance back = read_oumv(oumv);
  if (!(back.m == instance.m) || back.rounds != instance.rounds) {
    s.passed = false;
    s.detail = "OuMv round trip changed the instance";
    return s;
  }
  s.detail = "edge list and OuMv files round-trip";
  return s;
}

}  // namespace

VerifyReport cmd_verify(const VerifyOptions& options) {
  VerifyReport report;
  const std::vector<std::function<SuiteResult()>> suites = {
      [&] { return suite_graph_io(); },   [&] { return suite_counters(options); },
      [] { return suite_deciders(); },    [] { return suite_embedding(); },
      [] { return suite_poisson(); },     [] { return suite_dadv(); },
      [] { return suite_sol(); },         [&] { return suite_p3general(options); },
      [] { return suite_omv(); }};
  for (const auto& suite : suites) {
    try {
      report.suites.push_back(suite());
    } catch (const std::exception& e) {
      report.suites.push_back({"?", false, e.what()});
    }
  }
  return report;
}

void write_verify_report(std::ostream& out, const VerifyReport& report) {
  for (const SuiteResult& s : report.suites) {
    out << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.detail << '\n';
  }
  out << (report.passed() ? "verify: all suites passed" : "verify: failures") << '\n';
}

}  // namespace smoothdyn

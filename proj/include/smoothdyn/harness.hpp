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

#ifndef SMOOTHDYN_HARNESS_HPP_
#define SMOOTHDYN_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "smoothdyn/adversaries.hpp"
#include "smoothdyn/counters.hpp"
#include "smoothdyn/errors.hpp"
#include "smoothdyn/p3_general.hpp"
#include "smoothdyn/reduction.hpp"
#include "smoothdyn/smoothing.hpp"

namespace smoothdyn {

/// Invalid experiment configuration. The message names the offending field,
/// or the line and column for syntax errors.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

struct ExperimentConfig {
  std::string problem = "st3";
  std::string model = "oblivious-flip";
  NodeId n = 20;
  std::vector<double> p_grid = {0.5};
  std::uint64_t steps = 500;  // T
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  std::string out;
  /// uniform | incident | hub-attack
  std::string adversary = "uniform";
  /// Compare against the oracle every this many steps; 0 never.
  std::uint64_t query_every = 1;
  unsigned threads = 1;

  // reduce
  std::string mode = "sol";  // sol | p3general | omv-chain | histogram
  std::string counter = "exact";  // exact | incremental | pack
  std::uint64_t instances = 50;
  int repetitions = 20;

  // embedding
  std::uint64_t region = 250;
  std::uint64_t flips = 10;
  std::uint64_t budget = 200;

  /// Throws ConfigError naming the field.
  void validate() const;
};

/// Parses a JSON document. Unknown keys and type mismatches are errors.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "config");
ExperimentConfig load_config(const std::string& path);

struct MetricRow {
  std::int64_t trial = 0;  // -1 for aggregates, written as "all"
  double p = 0.0;
  NodeId n = 0;
  std::uint64_t steps = 0;
  std::string problem;
  std::string model;
  std::string metric;
  double value = 0.0;
};

inline constexpr std::string_view kCsvHeader = "trial,p,n,T,problem,model,metric,value";
void write_csv(std::ostream& out, const std::vector<MetricRow>& rows);
std::string format_decimal(double value);

/// Seed of trial `index`, split from the experiment seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Runs jobs 0..count-1 on `threads` workers and concatenates their rows in
/// index order. The first exception by index is rethrown.
std::vector<MetricRow> run_ordered(std::size_t count, unsigned threads,
                                   const std::function<std::vector<MetricRow>(std::size_t)>& job);

// --- Experiment primitives ---------------------------------------------------

struct CounterTrialResult {
  std::uint64_t steps = 0;
  std::uint64_t queries = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t updates = 0;
  std::uint64_t expensive = 0;
  std::uint64_t ops = 0;
  double wall_ns = 0.0;
  double expensive_fraction() const;
  double mean_ops() const;
};

struct CounterTrialSpec {
  CounterProblem problem = CounterProblem::ST3;
  AdversaryModel model = AdversaryModel::ObliviousFlip;
  std::string adversary = "uniform";
  NodeId n = 20;
  double p = 0.5;
  std::uint64_t steps = 500;
  std::uint64_t seed = 1;
  std::uint64_t query_every = 1;  // 0 disables the oracle
  St4Options st4;
};

/// One smoothed run with s = 0 and t = n - 1 starting from a smoothed G(n, 1/2).
CounterTrialResult counter_trial(const CounterTrialSpec& spec);

/// p + (1 - p) 2n / binom(n, 2).
double expected_expensive_fraction(double p, NodeId n);

struct DeciderTrialResult {
  std::uint64_t queries = 0;
  std::uint64_t errors = 0;
  double error_rate() const;
};

/// Oblivious flips incident to node 0 from an empty H0. Bipartite problems
/// split the nodes in halves and restrict pairs to cross pairs. The exact
/// answer is tracked incrementally and compared at every step.
DeciderTrialResult decider_trial(DecisionProblem problem, bool hybrid, NodeId n, double p,
                                 std::uint64_t steps, std::uint64_t seed);

/// R: `region` distinct pairs drawn uniformly, R': its first `flips` pairs.
EmbeddingTask random_embedding_task(NodeId n, std::uint64_t region, std::uint64_t flips,
                                    double p, Rng& rng);

struct P3GeneralResult {
  std::uint64_t queries = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t non_divisible = 0;
  std::uint64_t partition_checks = 0;
  std::uint64_t partition_failures = 0;
  std::uint64_t total_steps = 0;
  std::string first_defect;
};

struct P3GeneralSpec {
  NodeId n = 6;
  double p = 0.5;
  std::uint64_t steps = 500;
  std::uint64_t query_every = 25;
  std::uint64_t seed = 1;
  bool check_every_step = true;
  PackOptions pack;
};

/// Feeds a D_adv^p interior sequence into a SixteenPack over incremental st3
/// counters; compares the recovered count with the P3-graph oracle.
P3GeneralResult p3general_trial(const P3GeneralSpec& spec);

struct SolExperiment {
  std::uint64_t instances = 0;
  std::uint64_t rounds = 0;
  std::uint64_t errors = 0;
  double max_instance_error_rate = 0.0;
  std::vector<double> instance_error_rates;
};

St3Factory st3_factory_named(const std::string& name, double p);
SolExperiment sol_experiment(NodeId n, double p, std::uint64_t instances,
                             const St3Factory& factory, std::uint64_t seed);

struct OmvChainResult {
  std::uint64_t trials = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
  std::uint64_t split_mismatches = 0;
};

/// Random (M, u, v) triples; existence answers against the Boolean oracle and
/// the 8-way split against the F2 oracle.
OmvChainResult omv_chain_experiment(std::size_t n, std::uint64_t trials, int repetitions,
                                    std::uint64_t seed);

// --- Commands ----------------------------------------------------------------

struct RunOutput {
  std::vector<MetricRow> rows;
  /// Wall-time rows, kept apart so `rows` is reproducible.
  std::vector<MetricRow> timing;
  bool passed = true;
};

RunOutput cmd_simulate(const ExperimentConfig& config);
RunOutput cmd_bench(const ExperimentConfig& config);
RunOutput cmd_reduce(const ExperimentConfig& config);

struct VerifyOptions {
  bool st4_fault = false;
  bool pack_fault = false;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

VerifyReport cmd_verify(const VerifyOptions& options = {});
void write_verify_report(std::ostream& out, const VerifyReport& report);

}  // namespace smoothdyn

#endif  // SMOOTHDYN_HARNESS_HPP_

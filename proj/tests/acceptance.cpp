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

// Prints one PASS/FAIL line per acceptance criterion. Optional arguments pick
// criteria by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "smoothdyn/adversaries.hpp"
#include "smoothdyn/harness.hpp"
#include "smoothdyn/poisson.hpp"
#include "smoothdyn/reduction.hpp"

using namespace smoothdyn;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

const std::vector<CounterProblem> kCounters = {CounterProblem::ST2, CounterProblem::ST3,
                                               CounterProblem::ST4, CounterProblem::STriangle,
                                               CounterProblem::S4Cycle};

Outcome oracle_equivalence() {
  std::uint64_t queries = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t trials = 0;
  for (CounterProblem problem : kCounters) {
    for (NodeId n : {8u, 16u, 30u}) {
      for (auto model : {AdversaryModel::ObliviousFlip, AdversaryModel::ObliviousAddRemove,
                         AdversaryModel::Adaptive}) {
        for (double p : {0.0, 0.3, 1.0}) {
          for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            CounterTrialSpec spec;
            spec.problem = problem;
            spec.model = model;
            spec.adversary = model == AdversaryModel::Adaptive ? "hub-attack" : "uniform";
            spec.n = n;
            spec.p = p;
            spec.steps = 2000;
            spec.seed = seed;
            spec.query_every = 1;
            const CounterTrialResult r = counter_trial(spec);
            queries += r.queries;
            mismatches += r.mismatches;
            ++trials;
          }
        }
      }
    }
  }
  return {mismatches == 0,
          fmt("trials=%llu queries=%llu mismatches=%llu", (unsigned long long)trials,
              (unsigned long long)queries, (unsigned long long)mismatches)};
}

Outcome cost_profile() {
  const NodeId n = 2000;
  const std::uint64_t steps = 100000;
  const auto run = [&](double p) {
    CounterTrialSpec spec;
    spec.problem = CounterProblem::ST4;
    spec.model = AdversaryModel::ObliviousFlip;
    spec.adversary = "incident";
    spec.n = n;
    spec.p = p;
    spec.steps = steps;
    spec.seed = 7;
    spec.query_every = 0;
    return counter_trial(spec);
  };
  bool ok = true;
  std::string detail;
  double ops_at_one = 0.0;
  for (double p : {0.01, 0.1, 0.5, 1.0}) {
    const CounterTrialResult r = run(p);
    const double expected = expected_expensive_fraction(p, n);
    const double relative = std::abs(r.expensive_fraction() - expected) / expected;
    ok = ok && relative <= 0.2;
    detail += fmt("p=%g frac=%.5f expected=%.5f rel=%.3f; ", p, r.expensive_fraction(), expected,
                  relative);
    if (p == 1.0) ops_at_one = r.mean_ops();
  }
  const double ops_at_zero = run(0.0).mean_ops();
  const double ratio = ops_at_one / ops_at_zero;
  ok = ok && ratio >= 50.0;
  detail += fmt("mean_ops p=1 %.1f p=0 %.2f ratio=%.1f (need >= 50)", ops_at_one, ops_at_zero,
                ratio);
  return {ok, detail};
}

Outcome trivial_deciders() {
  const NodeId n = 200;
  bool ok = true;
  std::string detail;
  for (auto problem : {DecisionProblem::Connectivity, DecisionProblem::BipPerfectMatching}) {
    std::uint64_t queries = 0;
    std::uint64_t errors = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const DeciderTrialResult r = decider_trial(problem, false, n, 0.5, 10000, seed);
      queries += r.queries;
      errors += r.errors;
      worst = std::max(worst, r.error_rate());
    }
    const double rate = static_cast<double>(errors) / static_cast<double>(queries);
    ok = ok && rate <= 1.0 / n;
    detail += fmt("%s error_rate=%.6f worst_seed=%.6f (limit %.3f); ",
                  std::string(to_string(problem)).c_str(), rate, worst, 1.0 / n);
  }
  return {ok, detail};
}

Outcome adaptive_embedding() {
  const NodeId n = 100;
  const std::uint64_t trials = 2000;
  const std::uint64_t budget = 200;
  std::uint64_t failures = 0;
  std::uint64_t exact_at_one = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    for (double p : {0.5, 1.0}) {
      Rng rng = Rng::stream(trial, streams::kTrialBase + (p == 1.0));
      const EmbeddingTask task = random_embedding_task(n, 250, 10, p, rng);
      DynamicGraph g = random_graph(n, rng);
      const EmbedResult r = adaptive_embed(g, task, budget, trial_seed(trial, p == 1.0));
      if (p == 0.5) failures += !r.success;
      if (p == 1.0) exact_at_one += r.steps_used == 10;
    }
  }
  const double rate = static_cast<double>(failures) / static_cast<double>(trials);
  const double bound = adaptive_failure_bound(0.5, static_cast<double>(budget));
  return {rate <= bound && exact_at_one == trials,
          fmt("failure=%.4f bound=%.4f; p=1 exact r' steps in %llu/%llu trials", rate, bound,
              (unsigned long long)exact_at_one, (unsigned long long)trials)};
}

Outcome oblivious_embedding() {
  const NodeId n = 400;
  const double p = 0.95;
  const std::uint64_t r_prime = 8;
  const std::uint64_t r = 3200;
  const auto steps = static_cast<std::uint64_t>(std::ceil(3.0 * r_prime * std::log(n)));
  const std::uint64_t trials = 2000;
  std::uint64_t failures = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(trial, streams::kTrialBase);
    const EmbeddingTask task = random_embedding_task(n, r, r_prime, p, rng);
    DynamicGraph g = random_graph(n, rng);
    failures += !oblivious_ar_embed(g, task, steps, trial_seed(trial, 0)).success;
  }
  const double rate = static_cast<double>(failures) / static_cast<double>(trials);
  const double bound = oblivious_ar_failure_bound(p, static_cast<double>(steps),
                                                  static_cast<double>(r_prime),
                                                  static_cast<double>(r), n);
  const double pairs = oblivious_ar_failure_bound_pairs(p, static_cast<double>(steps),
                                                        static_cast<double>(r_prime),
                                                        static_cast<double>(r), n);
  // Exact failure probability: each target is proposed steps/r' times, and a
  // proposal step is adversarial (p), a random hit on R (q r / N) or harmless.
  const double q = 1.0 - p;
  const double hit = q * static_cast<double>(r) / static_cast<double>(pair_count(n));
  const double rounds = static_cast<double>(steps / r_prime);
  const double exact =
      1.0 - std::pow(std::pow(1.0 - hit, rounds) - std::pow(q - hit, rounds),
                     static_cast<double>(r_prime));
  return {rate <= bound,
          fmt("steps=%llu failure=%.4f bound=%.4f; informational: exact failure "
              "probability %.4f, bound with n(n-1)/2 pairs in place of n^2 %.4f",
              (unsigned long long)steps, rate, bound, exact, pairs)};
}

Outcome sol_correctness() {
  bool ok = true;
  std::string detail;
  for (double p : {0.25, 0.5, 1.0}) {
    const SolExperiment exact = sol_experiment(8, p, 50, exact_st3_factory(), 11);
    const SolExperiment real = sol_experiment(8, p, 50, incremental_st3_factory(), 12);
    ok = ok && exact.errors == 0 && real.max_instance_error_rate <= 0.05;
    detail += fmt("p=%g exact disagreements=%llu/%llu real max_error_rate=%.3f; ", p,
                  (unsigned long long)exact.errors, (unsigned long long)exact.rounds,
                  real.max_instance_error_rate);
  }
  return {ok, detail};
}

Outcome sequence_authenticity() {
  const HistogramCheck check = dadvp_verify_histogram(0.5, 8, 10000, 13);
  return {check.passes(1e-3),
          fmt("types chi2=%.2f dof=%d p=%.4f; lengths chi2=%.2f dof=%d p=%.4f",
              check.types.statistic, check.types.dof, check.types.p_value,
              check.lengths.statistic, check.lengths.dof, check.lengths.p_value)};
}

Outcome p3_recombination() {
  std::uint64_t queries = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t non_divisible = 0;
  std::uint64_t checks = 0;
  std::uint64_t partition_failures = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    P3GeneralSpec spec;
    spec.n = 6;
    spec.steps = 500;
    spec.query_every = 25;
    spec.seed = seed;
    spec.check_every_step = true;
    const P3GeneralResult r = p3general_trial(spec);
    queries += r.queries;
    mismatches += r.mismatches;
    non_divisible += r.non_divisible;
    checks += r.partition_checks;
    partition_failures += r.partition_failures;
  }
  return {mismatches == 0 && non_divisible == 0 && partition_failures == 0 && queries == 400,
          fmt("queries=%llu mismatches=%llu non_divisible=%llu partition_checks=%llu "
              "partition_failures=%llu",
              (unsigned long long)queries, (unsigned long long)mismatches,
              (unsigned long long)non_divisible, (unsigned long long)checks,
              (unsigned long long)partition_failures)};
}

Outcome omv_chain() {
  const OmvChainResult r = omv_chain_experiment(6, 1000, 20, 17);
  return {r.false_positives == 0 && r.false_negatives == 0 && r.split_mismatches == 0,
          fmt("triples=%llu false_positives=%llu false_negatives=%llu split_mismatches=%llu",
              (unsigned long long)r.trials, (unsigned long long)r.false_positives,
              (unsigned long long)r.false_negatives, (unsigned long long)r.split_mismatches)};
}

Outcome poisson_machinery() {
  Rng rng = Rng::stream(19, streams::kSequence);
  const int draws = 100000;
  int even = 0;
  for (int i = 0; i < draws; ++i) even += poisson_sample(1.0, rng) % 2 == 0;
  const double mass = static_cast<double>(even) / draws;
  const double target = (1.0 + std::exp(-2.0)) / 2.0;
  bool ok = std::abs(mass - target) <= 0.01;
  std::string detail = fmt("even mass=%.4f target=%.4f; poissonization p-values", mass, target);
  for (const ChiSquareResult& r : poissonization_check(0.5, 8, 10000, 23)) {
    ok = ok && r.passes(1e-3);
    detail += fmt(" %.4f", r.p_value);
  }
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 when no runtime limit applies
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "oracle-equivalence", 120, oracle_equivalence},
      {2, "cost-profile", 60, cost_profile},
      {3, "trivial-deciders", 120, trivial_deciders},
      {4, "adaptive-embedding", 60, adaptive_embedding},
      {5, "oblivious-ar-embedding", 60, oblivious_embedding},
      {6, "sol-correctness", 180, sol_correctness},
      {7, "sequence-authenticity", 0, sequence_authenticity},
      {8, "p3-recombination", 0, p3_recombination},
      {9, "omv-chain", 0, omv_chain},
      {10, "poisson-machinery", 0, poisson_machinery},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    while (!outcome.detail.empty() &&
           (outcome.detail.back() == ' ' || outcome.detail.back() == ';')) {
      outcome.detail.pop_back();
    }
    const bool in_time = c.limit_seconds == 0 || seconds < c.limit_seconds;
    const bool passed = outcome.passed && in_time;
    failed += !passed;
    std::string timing = fmt("runtime=%.1fs", seconds);
    if (c.limit_seconds > 0) timing += fmt(" (limit %.0fs)", c.limit_seconds);
    std::printf("%s criterion %d %s: %s; %s\n", passed ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

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

// Command-line front end: simulate | bench | reduce | verify.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smoothdyn/harness.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string timing;
  std::optional<unsigned> threads;
  std::optional<std::string> problem;
  std::optional<std::string> model;
  std::optional<std::uint32_t> n;
  std::vector<double> p;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> adversary;
  std::optional<std::uint64_t> query_every;
  std::optional<std::string> mode;
  std::optional<std::string> counter;
  std::optional<std::uint64_t> instances;
  std::optional<int> repetitions;
  std::optional<std::uint64_t> region;
  std::optional<std::uint64_t> flips;
  std::optional<std::uint64_t> budget;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "JSON experiment file");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--out", o.out, "CSV output path (default stdout)");
  app->add_option("--threads", o.threads, "worker threads");
  app->add_option("--timing", o.timing, "optional CSV for wall-time rows");
  app->add_option("--problem", o.problem);
  app->add_option("--model", o.model);
  app->add_option("--n", o.n);
  app->add_option("--p", o.p, "one value or a grid")->delimiter(',');
  app->add_option("--T", o.steps, "steps per trial");
  app->add_option("--trials", o.trials);
  app->add_option("--adversary", o.adversary, "uniform | incident | hub-attack");
  app->add_option("--query-every", o.query_every);
  app->add_option("--mode", o.mode, "sol | p3general | omv-chain | histogram");
  app->add_option("--counter", o.counter, "exact | incremental | pack");
  app->add_option("--instances", o.instances);
  app->add_option("--repetitions", o.repetitions);
  app->add_option("--region", o.region);
  app->add_option("--flips", o.flips);
  app->add_option("--budget", o.budget);
}

smoothdyn::ExperimentConfig resolve(const Overrides& o) {
  smoothdyn::ExperimentConfig c;
  if (!o.config_path.empty()) c = smoothdyn::load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.out = o.out;
  if (o.threads) c.threads = *o.threads;
  if (o.problem) c.problem = *o.problem;
  if (o.model) c.model = *o.model;
  if (o.n) c.n = *o.n;
  if (!o.p.empty()) c.p_grid = o.p;
  if (o.steps) c.steps = *o.steps;
  if (o.trials) c.trials = *o.trials;
  if (o.adversary) c.adversary = *o.adversary;
  if (o.query_every) c.query_every = *o.query_every;
  if (o.mode) c.mode = *o.mode;
  if (o.counter) c.counter = *o.counter;
  if (o.instances) c.instances = *o.instances;
  if (o.repetitions) c.repetitions = *o.repetitions;
  if (o.region) c.region = *o.region;
  if (o.flips) c.flips = *o.flips;
  if (o.budget) c.budget = *o.budget;
  return c;
}

void emit(const smoothdyn::RunOutput& output, const smoothdyn::ExperimentConfig& c,
          const std::string& timing_path) {
  if (c.out.empty()) {
    smoothdyn::write_csv(std::cout, output.rows);
  } else {
    std::ofstream file(c.out, std::ios::binary);
    if (!file) throw smoothdyn::ParameterError("cannot write " + c.out);
    smoothdyn::write_csv(file, output.rows);
  }
  if (!timing_path.empty()) {
    std::ofstream file(timing_path, std::ios::binary);
    if (!file) throw smoothdyn::ParameterError("cannot write " + timing_path);
    smoothdyn::write_csv(file, output.timing);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smoothed dynamic graph experiments"};
  app.require_subcommand(1);
  Overrides simulate_opts;
  Overrides bench_opts;
  Overrides reduce_opts;
  auto* simulate = app.add_subcommand("simulate", "smoothed runs checked against oracles");
  auto* bench = app.add_subcommand("bench", "update cost across a p grid");
  auto* reduce = app.add_subcommand("reduce", "reduction experiments");
  auto* verify = app.add_subcommand("verify", "invariant suites at pinned seeds");
  add_common(simulate, simulate_opts);
  add_common(bench, bench_opts);
  add_common(reduce, reduce_opts);
  std::string inject;
  verify->add_option("--inject", inject, "fault to inject: st4-degenerate | pack-skip")
      ->check(CLI::IsMember({"st4-degenerate", "pack-skip"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto c = resolve(simulate_opts);
      emit(smoothdyn::cmd_simulate(c), c, simulate_opts.timing);
      return 0;
    }
    if (bench->parsed()) {
      const auto c = resolve(bench_opts);
      emit(smoothdyn::cmd_bench(c), c, bench_opts.timing);
      return 0;
    }
    if (reduce->parsed()) {
      const auto c = resolve(reduce_opts);
      const auto output = smoothdyn::cmd_reduce(c);
      emit(output, c, reduce_opts.timing);
      std::cerr << (output.passed ? "reduce: PASS" : "reduce: FAIL") << '\n';
      return output.passed ? 0 : 1;
    }
    smoothdyn::VerifyOptions options;
    options.st4_fault = inject == "st4-degenerate";
    options.pack_fault = inject == "pack-skip";
    const auto report = smoothdyn::cmd_verify(options);
    smoothdyn::write_verify_report(std::cout, report);
    return report.passed() ? 0 : 1;
  } catch (const smoothdyn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

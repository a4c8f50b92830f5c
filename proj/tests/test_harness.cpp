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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "smoothdyn/harness.hpp"

using namespace smoothdyn;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

std::string csv_of(const std::vector<MetricRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

double metric(const std::vector<MetricRow>& rows, const std::string& name) {
  for (const MetricRow& row : rows) {
    if (row.metric == name) return row.value;
  }
  FAIL("missing metric " << name);
  return 0.0;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(
      R"({"problem": "st4", "model": "adaptive", "n": 12, "p": [0.1, 0.9],
          "T": 40, "trials": 3, "seed": 9, "adversary": "hub-attack", "threads": 2})");
  CHECK(c.problem == "st4");
  CHECK(c.model == "adaptive");
  CHECK(c.n == 12);
  CHECK(c.p_grid == std::vector<double>{0.1, 0.9});
  CHECK(c.steps == 40);
  CHECK(c.trials == 3);
  CHECK(c.seed == 9);
  CHECK(c.threads == 2);
  CHECK_NOTHROW(c.validate());
  CHECK(parse_config(R"({"steps": 7, "p_grid": 0.3})").p_grid == std::vector<double>{0.3});
  const ExperimentConfig defaults = parse_config("{}");
  CHECK(defaults.problem == "st3");
  CHECK(defaults.steps == 500);
}

TEST_CASE("config errors name the field or position") {
  CHECK(error_of("{\n  \"n\": 5,\n  oops\n}").find("cfg:3:") == 0);
  CHECK(error_of(R"({"colour": 1})").find("colour") != std::string::npos);
  CHECK(error_of(R"({"n": "ten"})").find("'n'") != std::string::npos);
  CHECK(error_of(R"({"trials": -2})").find("'trials'") != std::string::npos);
  CHECK(error_of("[1, 2]").find("object") != std::string::npos);

  const auto invalid = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(invalid([](ExperimentConfig& c) { c.p_grid = {1.5}; }).find("'p'") != std::string::npos);
  CHECK(invalid([](ExperimentConfig& c) { c.p_grid.clear(); }).find("'p'") != std::string::npos);
  CHECK(invalid([](ExperimentConfig& c) { c.problem = "st9"; }).find("'problem'") !=
        std::string::npos);
  CHECK(invalid([](ExperimentConfig& c) { c.model = "lazy"; }).find("'model'") !=
        std::string::npos);
  CHECK(invalid([](ExperimentConfig& c) { c.adversary = "hub-attack"; }).find("adaptive") !=
        std::string::npos);
  CHECK(invalid([](ExperimentConfig& c) { c.n = 100; }).find("'n'") != std::string::npos);
  CHECK(invalid([](ExperimentConfig& c) {
          c.n = 100;
          c.query_every = 0;
        }) == "no error");
  CHECK(invalid([](ExperimentConfig& c) { c.flips = c.region + 1; }).find("'flips'") !=
        std::string::npos);
}

TEST_CASE("csv output") {
  std::vector<MetricRow> rows = {{0, 0.5, 10, 100, "st3", "adaptive", "error_rate", 0.0},
                                 {-1, 0.25, 10, 100, "st3", "adaptive", "mean_ops", 2.5}};
  const std::string text = csv_of(rows);
  CHECK(text == std::string(kCsvHeader) +
                    "\n0,0.5,10,100,st3,adaptive,error_rate,0\n"
                    "all,0.25,10,100,st3,adaptive,mean_ops,2.5\n");
  CHECK(format_decimal(3.0) == "3");
  CHECK(format_decimal(0.1) == "0.1");
  CHECK(format_decimal(-2.0) == "-2");
}

TEST_CASE("run_ordered keeps job order and rethrows") {
  const auto rows = run_ordered(20, 4, [](std::size_t k) {
    return std::vector<MetricRow>{{static_cast<std::int64_t>(k), 0, 0, 0, "", "", "k", 0}};
  });
  REQUIRE(rows.size() == 20);
  for (std::size_t k = 0; k < rows.size(); ++k) CHECK(rows[k].trial == static_cast<std::int64_t>(k));
  CHECK_THROWS_AS(run_ordered(5, 2,
                              [](std::size_t k) -> std::vector<MetricRow> {
                                if (k == 3) throw ParameterError("boom");
                                return {};
                              }),
                  ParameterError);
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) == trial_seed(1, 0));
}

TEST_CASE("simulate counters") {
  ExperimentConfig c;
  c.problem = "st3";
  c.n = 14;
  c.p_grid = {0.0, 0.5};
  c.steps = 200;
  c.trials = 3;
  const RunOutput out = cmd_simulate(c);
  int error_rows = 0;
  for (const MetricRow& row : out.rows) {
    if (row.metric == "error_rate") {
      ++error_rows;
      CHECK(row.value == 0.0);
    }
    CHECK(row.metric != "amortized_ns");
  }
  CHECK(error_rows == 6);
  CHECK(out.timing.size() == 6);

  ExperimentConfig threaded = c;
  threaded.threads = 4;
  CHECK(csv_of(cmd_simulate(threaded).rows) == csv_of(out.rows));
  CHECK(csv_of(cmd_simulate(c).rows) == csv_of(out.rows));
  ExperimentConfig reseeded = c;
  reseeded.seed = 2;
  CHECK(csv_of(cmd_simulate(reseeded).rows) != csv_of(out.rows));
}

TEST_CASE("simulate other problems") {
  ExperimentConfig c;
  c.n = 40;
  c.steps = 300;
  c.query_every = 0;
  c.problem = "connectivity-trivial";
  CHECK(metric(cmd_simulate(c).rows, "error_rate") <= 0.05);
  c.problem = "embedding";
  c.model = "adaptive";
  c.region = 40;
  c.flips = 8;
  c.p_grid = {0.8};
  const RunOutput embed = cmd_simulate(c);
  CHECK(metric(embed.rows, "success") == 1.0);
  c.model = "oblivious-flip";
  CHECK_THROWS_AS(cmd_simulate(c), ConfigError);
}

TEST_CASE("counter trials") {
  CounterTrialSpec spec;
  spec.problem = CounterProblem::ST4;
  spec.n = 12;
  spec.steps = 300;
  spec.st4.degenerate_fault = true;
  CHECK(counter_trial(spec).mismatches > 0);
  spec.st4.degenerate_fault = false;
  const CounterTrialResult r = counter_trial(spec);
  CHECK(r.mismatches == 0);
  CHECK(r.queries == 300);
  CHECK(r.steps == 300);
  CHECK(expected_expensive_fraction(1.0, 10) == doctest::Approx(1.0));
  CHECK(expected_expensive_fraction(0.0, 10) == doctest::Approx(20.0 / 45.0));
}

TEST_CASE("bench aggregates") {
  ExperimentConfig c;
  c.problem = "st3";
  c.n = 30;
  c.steps = 500;
  c.trials = 4;
  c.query_every = 0;
  c.p_grid = {0.2};
  const RunOutput out = cmd_bench(c);
  std::vector<MetricRow> aggregates;
  for (const MetricRow& row : out.rows) {
    if (row.trial == -1) aggregates.push_back(row);
  }
  CHECK(metric(aggregates, "expected_expensive_frac") ==
        doctest::Approx(expected_expensive_fraction(0.2, 30)));
  CHECK(metric(aggregates, "expensive_frac") > 0.0);
  CHECK(metric(aggregates, "expensive_frac_se") >= 0.0);
  ExperimentConfig empty = c;
  empty.p_grid.clear();
  CHECK_THROWS_AS(cmd_bench(empty), ConfigError);
  ExperimentConfig decider = c;
  decider.problem = "connectivity-trivial";
  CHECK_THROWS_AS(cmd_bench(decider), ConfigError);
}

TEST_CASE("reduce modes") {
  ExperimentConfig c;
  c.n = 6;
  c.p_grid = {0.5};
  c.instances = 3;
  c.mode = "sol";
  const RunOutput sol = cmd_reduce(c);
  CHECK(sol.passed);
  CHECK(metric(sol.rows, "disagreements") == 0.0);
  c.mode = "omv-chain";
  c.instances = 200;
  const RunOutput chain = cmd_reduce(c);
  CHECK(chain.passed);
  CHECK(metric(chain.rows, "split_mismatches") == 0.0);
  c.mode = "p3general";
  c.steps = 100;
  c.trials = 2;
  CHECK(cmd_reduce(c).passed);
  c.mode = "histogram";
  c.instances = 2000;
  CHECK(cmd_reduce(c).passed);
}

TEST_CASE("verify with and without faults") {
  const VerifyReport clean = cmd_verify();
  CHECK(clean.passed());
  for (const SuiteResult& s : clean.suites) {
    CAPTURE(s.name);
    CAPTURE(s.detail);
    CHECK(s.passed);
  }
  const auto failed = [](const VerifyReport& report) {
    std::vector<std::string> names;
    for (const SuiteResult& s : report.suites) {
      if (!s.passed) names.push_back(s.name);
    }
    return names;
  };
  CHECK(failed(cmd_verify({true, false})) == std::vector<std::string>{"counters"});
  CHECK(failed(cmd_verify({false, true})) == std::vector<std::string>{"p3general"});
  std::ostringstream out;
  write_verify_report(out, clean);
  CHECK(out.str().find("PASS") != std::string::npos);
}

}  // TEST_SUITE

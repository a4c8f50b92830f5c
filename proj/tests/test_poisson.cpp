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

#include <cmath>
#include <vector>

#include "smoothdyn/errors.hpp"
#include "smoothdyn/poisson.hpp"
#include "smoothdyn/stats.hpp"

using namespace smoothdyn;

namespace {

double pmf(double lambda, std::uint64_t k) {
  const auto kd = static_cast<double>(k);
  return std::exp(-lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0));
}

/// Bins 0..max-1 plus an overflow bin, with matching probabilities for the
/// (optionally parity-restricted) distribution.
struct Binned {
  std::vector<std::uint64_t> counts;
  std::vector<double> probabilities;
};

Binned bin(const std::vector<std::uint64_t>& draws, double lambda, std::uint64_t max,
           int parity) {
  Binned out{std::vector<std::uint64_t>(max + 1, 0), std::vector<double>(max + 1, 0.0)};
  for (std::uint64_t k : draws) ++out.counts[std::min(k, max)];
  double total = 0.0;
  for (std::uint64_t k = 0; k < max; ++k) {
    if (parity >= 0 && static_cast<int>(k % 2) != parity) continue;
    out.probabilities[k] = pmf(lambda, k);
    total += out.probabilities[k];
  }
  double mass = parity < 0 ? 1.0 : (parity == 0 ? (1 + std::exp(-2 * lambda)) / 2
                                                 : (1 - std::exp(-2 * lambda)) / 2);
  out.probabilities[max] = std::max(0.0, mass - total);
  for (double& prob : out.probabilities) prob /= mass;
  return out;
}

}  // namespace

TEST_SUITE("poisson") {

TEST_CASE("sampler moments and zero mass") {
  for (double lambda : {0.3, 1.0, 4.5}) {
    Rng rng(static_cast<std::uint64_t>(lambda * 10));
    const int draws = 100000;
    double sum = 0.0;
    double square = 0.0;
    int zeros = 0;
    for (int i = 0; i < draws; ++i) {
      const auto k = static_cast<double>(poisson_sample(lambda, rng));
      sum += k;
      square += k * k;
      zeros += k == 0.0;
    }
    const double mean = sum / draws;
    const double variance = square / draws - mean * mean;
    CAPTURE(lambda);
    CHECK(std::abs(mean - lambda) <= 4 * std::sqrt(lambda / draws));
    CHECK(variance == doctest::Approx(lambda).epsilon(0.03));
    const double p0 = std::exp(-lambda);
    CHECK(std::abs(zeros / static_cast<double>(draws) - p0) <=
          4 * std::sqrt(p0 * (1 - p0) / draws));
  }
  Rng rng(1);
  CHECK(poisson_sample(0.0, rng) == 0);
  CHECK_THROWS_AS(poisson_sample(-1.0, rng), ParameterError);
  CHECK_THROWS_AS(poisson_sample(INFINITY, rng), ParameterError);
}

TEST_CASE("sampler matches the pmf") {
  Rng rng(2);
  std::vector<std::uint64_t> draws;
  for (int i = 0; i < 50000; ++i) draws.push_back(poisson_sample(2.0, rng));
  const Binned b = bin(draws, 2.0, 10, -1);
  CHECK(chi2_goodness_of_fit(b.counts, b.probabilities).passes(1e-3));
}

TEST_CASE("even mass equals the series") {
  for (double lambda : {1e-3, 0.5, 1.0, 3.0, 10.0}) {
    double series = 0.0;
    for (std::uint64_t k = 0; k < 200; k += 2) series += pmf(lambda, k);
    CHECK(poisson_even_mass(lambda) == doctest::Approx(series).epsilon(1e-12));
  }
  CHECK(poisson_even_mass(0.0) == 1.0);
}

TEST_CASE("parity-conditional draws follow the conditional pmf") {
  // 0.05 takes the inversion route for odd draws; 1.0 takes rejection.
  for (double lambda : {0.05, 1.0, 3.0}) {
    for (int parity : {0, 1}) {
      Rng rng(static_cast<std::uint64_t>(lambda * 100) + parity);
      std::vector<std::uint64_t> draws;
      for (int i = 0; i < 40000; ++i) {
        const std::uint64_t k = poisson_parity_conditional(lambda, parity == 1, rng);
        REQUIRE(static_cast<int>(k % 2) == parity);
        draws.push_back(k);
      }
      const Binned b = bin(draws, lambda, 12, parity);
      CAPTURE(lambda);
      CAPTURE(parity);
      CHECK(chi2_goodness_of_fit(b.counts, b.probabilities).passes(1e-3));
    }
  }
}

TEST_CASE("tiny rate odd draws are almost always one") {
  Rng rng(3);
  int ones = 0;
  for (int i = 0; i < 100000; ++i) ones += poisson_parity_conditional(1e-3, true, rng) == 1;
  CHECK(ones / 100000.0 >= 0.999);
  CHECK_THROWS_AS(poisson_parity_conditional(0.0, true, rng), ParameterError);
}

TEST_CASE("chi-square helpers") {
  const std::vector<std::uint64_t> fair = {250, 250, 250, 250};
  const std::vector<double> uniform(4, 0.25);
  const ChiSquareResult good = chi2_goodness_of_fit(fair, uniform);
  CHECK(good.statistic == doctest::Approx(0.0));
  CHECK(good.dof == 3);
  CHECK(good.p_value == doctest::Approx(1.0));
  const std::vector<std::uint64_t> skewed = {400, 200, 200, 200};
  // (150^2 + 3 * 50^2) / 250 = 120.
  const ChiSquareResult bad = chi2_goodness_of_fit(skewed, uniform);
  CHECK(bad.statistic == doctest::Approx(120.0));
  CHECK_FALSE(bad.passes(1e-3));
  // Upper tail of chi-square with 2 dof is exp(-x/2).
  const std::vector<std::uint64_t> three = {120, 90, 90};
  const std::vector<double> thirds(3, 1.0 / 3.0);
  const ChiSquareResult r = chi2_goodness_of_fit(three, thirds);
  CHECK(r.statistic == doctest::Approx(6.0));
  CHECK(r.p_value == doctest::Approx(std::exp(-3.0)));
  CHECK(chi2_homogeneity(fair, fair).p_value == doctest::Approx(1.0));
  CHECK_FALSE(chi2_homogeneity(fair, skewed).passes(1e-3));
  CHECK_THROWS_AS(chi2_goodness_of_fit(fair, thirds), ParameterError);

  const std::vector<double> values = {1.0, 2.0, 3.0, 4.0};
  const MeanSe ms = mean_and_se(values);
  CHECK(ms.mean == doctest::Approx(2.5));
  CHECK(ms.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  const std::vector<std::uint64_t> raw = {0, 1, 1, 5, 9};
  CHECK(histogram_counts(raw, 3) == std::vector<std::uint64_t>{1, 2, 0, 2});
}

}  // TEST_SUITE

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

#include "smoothdyn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "smoothdyn/errors.hpp"

namespace smoothdyn {
namespace {

double upper_tail(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

/// Group boundaries so that every group's weight reaches `min_weight`; a
/// light tail is folded into the previous group.
std::vector<std::size_t> merge_groups(std::span<const double> weight,
                                      double min_weight) {
  std::vector<std::size_t> ends;
  double acc = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    acc += weight[i];
    if (acc >= min_weight) {
      ends.push_back(i + 1);
      acc = 0.0;
    }
  }
  if (acc > 0.0 || ends.empty()) {
    if (ends.empty()) {
      ends.push_back(weight.size());
    } else {
      ends.back() = weight.size();
    }
  }
  return ends;
}

}  // namespace

ChiSquareResult chi2_goodness_of_fit(std::span<const std::uint64_t> observed,
                                     std::span<const double> probabilities,
                                     double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw ParameterError("chi-square: bins and probabilities differ in size");
  }
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  std::vector<double> expected(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    expected[i] = probabilities[i] * total;
  }
  const std::vector<std::size_t> ends = merge_groups(expected, min_expected);
  ChiSquareResult result;
  std::size_t begin = 0;
  for (std::size_t end : ends) {
    double o = 0.0;
    double e = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      o += static_cast<double>(observed[i]);
      e += expected[i];
    }
    if (e > 0.0) {
      result.statistic += (o - e) * (o - e) / e;
    } else if (o > 0.0) {
      result.statistic = INFINITY;
    }
    begin = end;
  }
  result.dof = static_cast<int>(ends.size()) - 1;
  result.p_value = std::isinf(result.statistic) ? 0.0 : upper_tail(result.statistic, result.dof);
  return result;
}

ChiSquareResult chi2_homogeneity(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b,
                                 double min_expected) {
  if (a.size() != b.size() || a.empty()) {
    throw ParameterError("chi-square: samples have different bin counts");
  }
  const double na = std::accumulate(a.begin(), a.end(), 0.0);
  const double nb = std::accumulate(b.begin(), b.end(), 0.0);
  if (na == 0.0 || nb == 0.0) throw ParameterError("chi-square: empty sample");
  std::vector<double> pooled(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    pooled[i] = static_cast<double>(a[i] + b[i]);
  }
  // Smaller expected count of the two rows is pooled * min(na, nb) / total.
  const double scale = std::min(na, nb) / (na + nb);
  const std::vector<std::size_t> ends = merge_groups(pooled, min_expected / scale);
  ChiSquareResult result;
  std::size_t begin = 0;
  for (std::size_t end : ends) {
    double oa = 0.0;
    double ob = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      oa += static_cast<double>(a[i]);
      ob += static_cast<double>(b[i]);
    }
    const double col = oa + ob;
    if (col > 0.0) {
      const double ea = col * na / (na + nb);
      const double eb = col * nb / (na + nb);
      result.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    begin = end;
  }
  result.dof = static_cast<int>(ends.size()) - 1;
  result.p_value = upper_tail(result.statistic, result.dof);
  return result;
}

std::vector<std::uint64_t> histogram_counts(std::span<const std::uint64_t> values,
                                            std::uint64_t max_value) {
  std::vector<std::uint64_t> counts(max_value + 1, 0);
  for (std::uint64_t v : values) ++counts[std::min(v, max_value)];
  return counts;
}

MeanSe mean_and_se(std::span<const double> values) {
  MeanSe out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace smoothdyn

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

#ifndef SMOOTHDYN_STATS_HPP_
#define SMOOTHDYN_STATS_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace smoothdyn {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool passes(double alpha) const { return p_value >= alpha; }
};

/// Goodness of fit of observed counts to bin probabilities. Adjacent bins are
/// merged left to right until each expected count reaches `min_expected`.
ChiSquareResult chi2_goodness_of_fit(std::span<const std::uint64_t> observed,
                                     std::span<const double> probabilities,
                                     double min_expected = 5.0);

/// Two-sample homogeneity test on a 2 x k table, with the same merging rule
/// applied to the pooled expected counts.
ChiSquareResult chi2_homogeneity(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b,
                                 double min_expected = 5.0);

/// Counts of values 0..max_value, the last bin collecting everything above.
std::vector<std::uint64_t> histogram_counts(std::span<const std::uint64_t> values,
                                            std::uint64_t max_value);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_and_se(std::span<const double> values);

}  // namespace smoothdyn

#endif  // SMOOTHDYN_STATS_HPP_

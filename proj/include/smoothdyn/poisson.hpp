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

#ifndef SMOOTHDYN_POISSON_HPP_
#define SMOOTHDYN_POISSON_HPP_

#include <cstdint>

#include "smoothdyn/rng.hpp"

namespace smoothdyn {

/// Exact Poisson(lambda): counts unit-rate exponential arrivals in
/// [0, lambda]. Cost is proportional to the returned value plus one.
std::uint64_t poisson_sample(double lambda, Rng& rng);

/// Mass of the even outcomes of Poisson(lambda): (1 + e^{-2 lambda}) / 2.
double poisson_even_mass(double lambda);

inline constexpr int kParityRetryCap = 64;

/// Poisson(lambda) conditioned on the given parity. Rejection sampling with
/// at most kParityRetryCap draws when the target parity has mass >= 1/3;
/// below that (odd parity, lambda < ln(3)/2) the conditional law is inverted
/// directly. Throws SamplingError if the retry cap is hit.
std::uint64_t poisson_parity_conditional(double lambda, bool odd, Rng& rng);

}  // namespace smoothdyn

#endif  // SMOOTHDYN_POISSON_HPP_

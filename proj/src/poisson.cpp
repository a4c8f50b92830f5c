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

#include "smoothdyn/poisson.hpp"

#include <cmath>
#include <string>

#include "smoothdyn/errors.hpp"

namespace smoothdyn {

std::uint64_t poisson_sample(double lambda, Rng& rng) {
  if (!(lambda >= 0.0) || std::isinf(lambda)) {
    throw ParameterError("Poisson rate must be finite and nonnegative");
  }
  std::uint64_t k = 0;
  double elapsed = 0.0;
  for (;;) {
    // 1 - uniform() lies in (0, 1], so the log is finite.
    elapsed -= std::log(1.0 - rng.uniform());
    if (elapsed >= lambda) return k;
    ++k;
  }
}

double poisson_even_mass(double lambda) {
  return (1.0 + std::exp(-2.0 * lambda)) / 2.0;
}

std::uint64_t poisson_parity_conditional(double lambda, bool odd, Rng& rng) {
  if (!(lambda > 0.0)) {
    throw ParameterError("parity-conditional Poisson needs lambda > 0");
  }
  const double even = poisson_even_mass(lambda);
  const double target = odd ? 1.0 - even : even;
  if (target >= 1.0 / 3.0) {
    for (int attempt = 0; attempt < kParityRetryCap; ++attempt) {
      const std::uint64_t k = poisson_sample(lambda, rng);
      if ((k % 2 == 1) == odd) return k;
    }
    throw SamplingError("parity-conditional Poisson exceeded " +
                        std::to_string(kParityRetryCap) + " retries");
  }
  // Inversion over odd k: P(k) / P(odd) with P(k) = e^{-lambda} lambda^k / k!.
  const double u = rng.uniform() * target;
  double term = std::exp(-lambda) * lambda;  // k = 1
  double cumulative = term;
  std::uint64_t k = 1;
  while (cumulative < u && term > 0.0) {
    term *= lambda * lambda / static_cast<double>((k + 1) * (k + 2));
    k += 2;
    cumulative += term;
  }
  return k;
}

}  // namespace smoothdyn

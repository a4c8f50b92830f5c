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

#ifndef SMOOTHDYN_RNG_HPP_
#define SMOOTHDYN_RNG_HPP_

#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace smoothdyn {

/// Deterministic PRNG used everywhere in the library.
///
/// Algorithm: xoshiro256** (Blackman & Vigna), state seeded by four
/// successive outputs of SplitMix64. Derived quantities are defined here
/// rather than through <random> distributions so that a reimplementation in
/// another language reproduces every log bit-for-bit:
///
///   uniform()    = (next() >> 11) * 2^-53                 in [0, 1)
///   bounded(k)   = Lemire's multiply-shift with rejection  in [0, k)
///   bernoulli(p) = uniform() < p
///
/// Streams: `Rng::stream(seed, id)` seeds with mix64(seed ^ mix64(id + 1)),
/// where mix64 is the SplitMix64 finalizer. Named stream ids are listed in
/// `streams` below.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(mix64(seed ^ mix64(stream_id + 1)));
  }

  /// Child generator for a numbered sub-stream (per trial, per copy, ...).
  Rng split(std::uint64_t stream_id) { return Rng::stream(next(), stream_id); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next(); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t bounded(std::uint64_t bound) {
    __uint128_t m = static_cast<__uint128_t>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Fisher-Yates, last position first.
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(bounded(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    return mix64(x);
  }

  std::uint64_t state_[4];
};

namespace streams {
inline constexpr std::uint64_t kAdversary = 1;
inline constexpr std::uint64_t kSmoothing = 2;
inline constexpr std::uint64_t kInitialGraph = 3;
inline constexpr std::uint64_t kSequence = 4;
inline constexpr std::uint64_t kTrialBase = 1u << 20;
}  // namespace streams

}  // namespace smoothdyn

#endif  // SMOOTHDYN_RNG_HPP_

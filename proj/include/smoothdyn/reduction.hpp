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

#ifndef SMOOTHDYN_REDUCTION_HPP_
#define SMOOTHDYN_REDUCTION_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "smoothdyn/graph.hpp"
#include "smoothdyn/rng.hpp"
#include "smoothdyn/stats.hpp"

namespace smoothdyn {

// --- Boolean matrices and vectors -------------------------------------------

using BitVector = std::vector<std::uint8_t>;

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

  static BitMatrix random(std::size_t n, Rng& rng);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint8_t at(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, std::uint8_t bit) { bits_[i * cols_ + j] = bit & 1U; }
  BitMatrix operator+(const BitMatrix& other) const;  // over F2

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

BitVector random_bits(std::size_t n, Rng& rng);
BitVector xor_bits(const BitVector& a, const BitVector& b);

/// u^T M v over F2. Throws ParameterError on a dimension mismatch.
bool f2_oumv_oracle(const BitMatrix& m, const BitVector& u, const BitVector& v);
/// u^T M v over the integers.
std::uint64_t integer_oumv(const BitMatrix& m, const BitVector& u, const BitVector& v);

struct OuMvInstance {
  std::size_t n = 0;
  BitMatrix m;
  /// (u_i, v_i) for i = 0..n.
  std::vector<std::pair<BitVector, BitVector>> rounds;

  /// Every entry i.i.d. uniform.
  static OuMvInstance random(std::size_t n, Rng& rng);
};

/// "n", then n rows of M as 0/1 strings, then n+1 lines "u_bits v_bits".
void write_oumv(std::ostream& out, const OuMvInstance& instance);
OuMvInstance read_oumv(std::istream& in);

// --- P3-partite layout --------------------------------------------------------

enum class EdgeType : std::uint8_t { SA, AB, BT, SB, AT, AA, BB, ST };
std::string to_string(EdgeType type);

/// Nodes: s = 0, A = 1..n, B = n+1..2n, t = 2n+1.
class P3Layout {
 public:
  explicit P3Layout(NodeId n);

  NodeId n() const { return n_; }
  NodeId node_count() const { return 2 * n_ + 2; }
  NodeId s() const { return 0; }
  NodeId t() const { return 2 * n_ + 1; }
  NodeId a(std::size_t i) const { return static_cast<NodeId>(1 + i); }
  NodeId b(std::size_t j) const { return static_cast<NodeId>(1 + n_ + j); }
  bool in_a(NodeId x) const { return x >= 1 && x <= n_; }
  bool in_b(NodeId x) const { return x > n_ && x <= 2 * n_; }

  EdgeType classify(NodePair e) const;
  static bool interior(EdgeType type) {
    return type == EdgeType::SA || type == EdgeType::AB || type == EdgeType::BT;
  }
  /// R_P3 = sA u AB u Bt, n(n+2) pairs: sA first, then AB row-major, then Bt.
  const std::vector<NodePair>& interior_pairs() const { return interior_; }
  /// The remaining (n+1)(2n+1) - n(n+2) pairs.
  const std::vector<NodePair>& exterior_pairs() const { return exterior_; }

  /// Graph with sA from u, AB from M and Bt from v.
  DynamicGraph mirror(const BitMatrix& m, const BitVector& u, const BitVector& v) const;

 private:
  NodeId n_;
  std::vector<NodePair> interior_;
  std::vector<NodePair> exterior_;
};

// --- D_adv^p ----------------------------------------------------------------

/// One p-smoothed step of the adversary that flips a uniform sA or Bt edge:
/// q_side = p/(2n) + (1-p)/(n(n+2)) per sA/Bt pair, q_mid = (1-p)/(n(n+2))
/// per AB pair.
class DAdvP {
 public:
  DAdvP(double p, NodeId n);

  double q_side() const { return q_side_; }
  double q_mid() const { return q_mid_; }
  double probability(const P3Layout& layout, NodePair e) const;
  NodePair sample(const P3Layout& layout, Rng& rng) const;

  /// 2n q_side + n^2 q_mid in exact arithmetic.
  static boost::rational<long long> total_mass(boost::rational<long long> p,
                                               long long n);

 private:
  double p_;
  NodeId n_;
  double q_side_;
  double q_mid_;
};

/// Occurrence counts per pair.
using Histogram = std::map<NodePair, std::uint64_t>;
Histogram histogram_of(const std::vector<NodePair>& sequence);

// --- st3 instances ----------------------------------------------------------

/// A black-box st3 data structure over its own copy of the graph.
class St3Instance {
 public:
  virtual ~St3Instance() = default;
  virtual void preprocess(const DynamicGraph& g0) = 0;
  virtual void flip(NodePair e) = 0;
  virtual std::uint64_t query() = 0;
  virtual std::uint64_t ops() const { return 0; }
};

using St3Factory =
    std::function<std::unique_ptr<St3Instance>(const P3Layout&, std::uint64_t seed)>;

/// Recomputes the count by exhaustive enumeration at every query.
St3Factory exact_st3_factory();
/// The incremental counter.
St3Factory incremental_st3_factory();

// --- SOL --------------------------------------------------------------------

/// ceil(5 n ln n / p).
std::uint64_t sol_horizon(std::size_t n, double p);

struct ReductionOutput {
  std::array<std::vector<NodePair>, 3> sequences;
  /// Shared sA/Bt occurrence counts.
  Histogram shared;
  /// AB draws z^j; copy j receives the draws of the other two.
  std::array<Histogram, 3> ab_draws;
};

/// Steps 4-7: parity-conditional sA/Bt counts, three AB batches, shuffle.
ReductionOutput reduction_steps(const P3Layout& layout, double p, std::uint64_t t,
                                const BitVector& u_dif, const BitVector& v_dif,
                                Rng& rng);

class SolSolver {
 public:
  SolSolver(const BitMatrix& m, const BitVector& u0, const BitVector& v0, double p,
            const St3Factory& factory, std::uint64_t seed);

  /// Answer for (u0, v0) from a single query.
  bool initial_answer();
  /// One round with the next vector pair.
  bool round(const BitVector& u, const BitVector& v);

  std::uint64_t horizon() const { return t_; }
  std::uint64_t updates() const { return updates_; }
  std::uint64_t ops() const;
  const ReductionOutput& last_output() const { return last_; }

 private:
  P3Layout layout_;
  double p_;
  std::uint64_t t_;
  Rng rng_;
  std::array<std::unique_ptr<St3Instance>, 3> copies_;
  BitVector u_prev_;
  BitVector v_prev_;
  std::uint64_t updates_ = 0;
  ReductionOutput last_;
};

struct SolReport {
  std::vector<bool> answers;
  std::vector<bool> expected;
  std::size_t errors = 0;
  std::uint64_t updates = 0;
  double error_rate() const {
    return answers.empty() ? 0.0
                           : static_cast<double>(errors) / static_cast<double>(answers.size());
  }
};

SolReport sol_solve(const OuMvInstance& instance, double p, const St3Factory& factory,
                    std::uint64_t seed);

struct HistogramCheck {
  ChiSquareResult types;
  ChiSquareResult lengths;
  std::array<std::uint64_t, 3> synthetic_types{};
  std::array<std::uint64_t, 3> genuine_types{};
  bool passes(double alpha) const { return types.passes(alpha) && lengths.passes(alpha); }
};

/// Reduction sequences fed with parity vectors drawn from genuine histograms,
/// against genuine Poisson(t)-length D_adv^p sequences: chi-square on the
/// sA/AB/Bt type counts and on the length histogram.
HistogramCheck dadvp_verify_histogram(double p, NodeId n, std::size_t samples,
                                      std::uint64_t seed);

/// Per-pair occurrence counts of Poisson(t)-length D_adv^p sequences against
/// independent Poisson(D(e) t) draws, for one pair of each interior type.
std::array<ChiSquareResult, 3> poissonization_check(double p, NodeId n,
                                                    std::size_t samples,
                                                    std::uint64_t seed);

// --- Existence and worst-case reductions ------------------------------------

using ParitySolver =
    std::function<bool(const BitMatrix&, const BitVector&, const BitVector&)>;

/// Zeroes each 1 of M with probability 1/2, `repetitions` times; reports 1 iff
/// some trial has odd parity.
bool omv_parity_reduction(const BitMatrix& m, const BitVector& u, const BitVector& v,
                          const ParitySolver& solver, int repetitions, Rng& rng);

/// Splits M, u, v into uniform halves and sums the 8 sub-products mod 2.
bool worstcase_to_average_split(const BitMatrix& m, const BitVector& u,
                                const BitVector& v, const ParitySolver& solver,
                                Rng& rng);

}  // namespace smoothdyn

#endif  // SMOOTHDYN_REDUCTION_HPP_

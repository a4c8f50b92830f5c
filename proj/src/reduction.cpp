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

#include "smoothdyn/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "smoothdyn/counters.hpp"
#include "smoothdyn/errors.hpp"
#include "smoothdyn/oracles.hpp"
#include "smoothdyn/poisson.hpp"

namespace smoothdyn {

BitMatrix BitMatrix::random(std::size_t n, Rng& rng) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, rng.next() >> 63);
  }
  return m;
}

BitMatrix BitMatrix::operator+(const BitMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw ParameterError("matrix dimensions differ");
  }
  BitMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] = bits_[k] ^ other.bits_[k];
  return out;
}

BitVector random_bits(std::size_t n, Rng& rng) {
  BitVector v(n);
  for (auto& bit : v) bit = static_cast<std::uint8_t>(rng.next() >> 63);
  return v;
}

BitVector xor_bits(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw ParameterError("vector lengths differ");
  BitVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

namespace {
void check_dims(const BitMatrix& m, const BitVector& u, const BitVector& v) {
  if (u.size() != m.rows() || v.size() != m.cols()) {
    throw ParameterError("dimension mismatch: M is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", u has " +
                         std::to_string(u.size()) + ", v has " +
                         std::to_string(v.size()));
  }
}
}  // namespace

bool f2_oumv_oracle(const BitMatrix& m, const BitVector& u, const BitVector& v) {
  check_dims(m, u, v);
  unsigned parity = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!u[i]) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) parity ^= m.at(i, j) & v[j];
  }
  return parity != 0;
}

std::uint64_t integer_oumv(const BitMatrix& m, const BitVector& u, const BitVector& v) {
  check_dims(m, u, v);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!u[i]) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) total += m.at(i, j) & v[j];
  }
  return total;
}

OuMvInstance OuMvInstance::random(std::size_t n, Rng& rng) {
  OuMvInstance instance;
  instance.n = n;
  instance.m = BitMatrix::random(n, rng);
  for (std::size_t i = 0; i <= n; ++i) {
    BitVector u = random_bits(n, rng);
    BitVector v = random_bits(n, rng);
    instance.rounds.emplace_back(std::move(u), std::move(v));
  }
  return instance;
}

namespace {
std::string bits_to_string(const BitVector& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

BitVector parse_bits(const std::string& s, std::size_t n, std::size_t line) {
  if (s.size() != n) {
    throw FormatError("OuMv line " + std::to_string(line) + ": expected " +
                      std::to_string(n) + " bits");
  }
  BitVector bits(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] != '0' && s[i] != '1') {
      throw FormatError("OuMv line " + std::to_string(line) + ": not a 0/1 string");
    }
    bits[i] = s[i] == '1';
  }
  return bits;
}
}  // namespace

void write_oumv(std::ostream& out, const OuMvInstance& instance) {
  out << instance.n << '\n';
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (std::size_t j = 0; j < instance.n; ++j) out << (instance.m.at(i, j) ? '1' : '0');
    out << '\n';
  }
  for (const auto& [u, v] : instance.rounds) {
    out << bits_to_string(u) << ' ' << bits_to_string(v) << '\n';
  }
}

OuMvInstance read_oumv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw FormatError("OuMv: missing dimension line");
  long long n = -1;
  std::istringstream(line) >> n;
  if (n < 1) throw FormatError("OuMv: bad dimension");
  OuMvInstance instance;
  instance.n = static_cast<std::size_t>(n);
  instance.m = BitMatrix(instance.n, instance.n);
  for (std::size_t i = 0; i < instance.n; ++i) {
    ++line_no;
    if (!std::getline(in, line)) throw FormatError("OuMv: missing matrix row");
    const BitVector row = parse_bits(line, instance.n, line_no);
    for (std::size_t j = 0; j < instance.n; ++j) instance.m.set(i, j, row[j]);
  }
  for (std::size_t i = 0; i <= instance.n; ++i) {
    ++line_no;
    if (!std::getline(in, line)) throw FormatError("OuMv: missing vector pair");
    std::istringstream row(line);
    std::string us;
    std::string vs;
    if (!(row >> us >> vs)) {
      throw FormatError("OuMv line " + std::to_string(line_no) + ": expected \"u v\"");
    }
    instance.rounds.emplace_back(parse_bits(us, instance.n, line_no),
                                 parse_bits(vs, instance.n, line_no));
  }
  return instance;
}

// ---------------------------------------------------------------------------

std::string to_string(EdgeType type) {
  switch (type) {
    case EdgeType::SA: return "sA";
    case EdgeType::AB: return "AB";
    case EdgeType::BT: return "Bt";
    case EdgeType::SB: return "sB";
    case EdgeType::AT: return "At";
    case EdgeType::AA: return "AA";
    case EdgeType::BB: return "BB";
    case EdgeType::ST: return "st";
  }
  return "?";
}

P3Layout::P3Layout(NodeId n) : n_(n) {
  if (n < 1) throw ParameterError("P3 layout needs n >= 1");
  for (NodeId i = 0; i < n; ++i) interior_.emplace_back(s(), a(i));
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) interior_.emplace_back(a(i), b(j));
  }
  for (NodeId j = 0; j < n; ++j) interior_.emplace_back(b(j), t());
  for (std::uint64_t k = 0; k < pair_count(node_count()); ++k) {
    const NodePair e = pair_from_index(k);
    if (!interior(classify(e))) exterior_.push_back(e);
  }
}

EdgeType P3Layout::classify(NodePair e) const {
  const NodeId x = e.u();
  const NodeId y = e.v();
  if (x == s()) {
    if (y == t()) return EdgeType::ST;
    return in_a(y) ? EdgeType::SA : EdgeType::SB;
  }
  if (y == t()) return in_a(x) ? EdgeType::AT : EdgeType::BT;
  if (in_a(x) && in_a(y)) return EdgeType::AA;
  if (in_b(x) && in_b(y)) return EdgeType::BB;
  return EdgeType::AB;
}

DynamicGraph P3Layout::mirror(const BitMatrix& m, const BitVector& u,
                              const BitVector& v) const {
  check_dims(m, u, v);
  if (u.size() != n_) throw ParameterError("layout and instance sizes differ");
  DynamicGraph g(node_count());
  for (NodeId i = 0; i < n_; ++i) {
    if (u[i]) g.add({s(), a(i)});
    if (v[i]) g.add({b(i), t()});
    for (NodeId j = 0; j < n_; ++j) {
      if (m.at(i, j)) g.add({a(i), b(j)});
    }
  }
  return g;
}

DAdvP::DAdvP(double p, NodeId n) : p_(p), n_(n) {
  if (!(p >= 0.0 && p <= 1.0) || n < 1) throw ParameterError("bad D_adv parameters");
  const double nn = static_cast<double>(n);
  q_side_ = p / (2.0 * nn) + (1.0 - p) / (nn * (nn + 2.0));
  q_mid_ = (1.0 - p) / (nn * (nn + 2.0));
}

double DAdvP::probability(const P3Layout& layout, NodePair e) const {
  switch (layout.classify(e)) {
    case EdgeType::SA:
    case EdgeType::BT: return q_side_;
    case EdgeType::AB: return q_mid_;
    default: return 0.0;
  }
}

NodePair DAdvP::sample(const P3Layout& layout, Rng& rng) const {
  if (rng.bernoulli(p_)) {
    // The adversary flips a uniform sA or Bt pair.
    const auto k = static_cast<NodeId>(rng.bounded(2 * n_));
    return k < n_ ? NodePair(layout.s(), layout.a(k)) : NodePair(layout.b(k - n_), layout.t());
  }
  const auto& pairs = layout.interior_pairs();
  return pairs[rng.bounded(pairs.size())];
}

boost::rational<long long> DAdvP::total_mass(boost::rational<long long> p, long long n) {
  using Q = boost::rational<long long>;
  const Q side = p / Q(2 * n) + (Q(1) - p) / Q(n * (n + 2));
  const Q mid = (Q(1) - p) / Q(n * (n + 2));
  return Q(2 * n) * side + Q(n * n) * mid;
}

Histogram histogram_of(const std::vector<NodePair>& sequence) {
  Histogram h;
  for (const NodePair& e : sequence) ++h[e];
  return h;
}

// ---------------------------------------------------------------------------

namespace {

class ExactSt3 : public St3Instance {
 public:
  explicit ExactSt3(const P3Layout& layout) : s_(layout.s()), t_(layout.t()) {}
  void preprocess(const DynamicGraph& g0) override { g_ = g0; }
  void flip(NodePair e) override { g_.flip(e); }
  std::uint64_t query() override { return bf_st_paths(g_, s_, t_, 3); }

 private:
  NodeId s_;
  NodeId t_;
  DynamicGraph g_;
};

class IncrementalSt3 : public St3Instance {
 public:
  explicit IncrementalSt3(const P3Layout& layout)
      : counter_(layout.node_count(), layout.s(), layout.t()) {}
  void preprocess(const DynamicGraph& g0) override {
    g_ = g0;
    counter_.preprocess(g_);
  }
  void flip(NodePair e) override {
    counter_.update(g_, e, !g_.has_edge(e));
    g_.flip(e);
  }
  std::uint64_t query() override { return counter_.query(); }
  std::uint64_t ops() const override { return counter_.stats().ops; }

 private:
  DynamicGraph g_;
  St3Counter counter_;
};

}  // namespace

St3Factory exact_st3_factory() {
  return [](const P3Layout& layout, std::uint64_t) {
    return std::make_unique<ExactSt3>(layout);
  };
}

St3Factory incremental_st3_factory() {
  return [](const P3Layout& layout, std::uint64_t) {
    return std::make_unique<IncrementalSt3>(layout);
  };
}

std::uint64_t sol_horizon(std::size_t n, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("SOL needs 0 < p <= 1");
  if (n < 2) throw ParameterError("SOL needs n >= 2");
  const double nn = static_cast<double>(n);
  return static_cast<std::uint64_t>(std::ceil(5.0 * nn * std::log(nn) / p));
}

ReductionOutput reduction_steps(const P3Layout& layout, double p, std::uint64_t t,
                                const BitVector& u_dif, const BitVector& v_dif,
                                Rng& rng) {
  const NodeId n = layout.n();
  if (u_dif.size() != n || v_dif.size() != n) {
    throw ParameterError("difference vectors do not match the layout");
  }
  const DAdvP dadv(p, n);
  const double td = static_cast<double>(t);
  ReductionOutput out;
  const auto add_shared = [&](NodePair e, std::uint64_t z) {
    if (z == 0) return;
    out.shared[e] = z;
    for (auto& seq : out.sequences) seq.insert(seq.end(), z, e);
  };
  for (NodeId i = 0; i < n; ++i) {
    add_shared({layout.s(), layout.a(i)},
               poisson_parity_conditional(dadv.q_side() * td, u_dif[i] != 0, rng));
  }
  for (NodeId j = 0; j < n; ++j) {
    add_shared({layout.b(j), layout.t()},
               poisson_parity_conditional(dadv.q_side() * td, v_dif[j] != 0, rng));
  }
  const double nn = static_cast<double>(n);
  const double lambda_ab = (1.0 - p) * nn / (nn + 2.0) * (td / 2.0);
  for (std::size_t j = 0; j < 3; ++j) {
    const std::uint64_t z = poisson_sample(lambda_ab, rng);
    for (std::uint64_t k = 0; k < z; ++k) {
      const NodePair e(layout.a(rng.bounded(n)), layout.b(rng.bounded(n)));
      ++out.ab_draws[j][e];
      for (std::size_t other = 0; other < 3; ++other) {
        if (other != j) out.sequences[other].push_back(e);
      }
    }
  }
  for (auto& seq : out.sequences) rng.shuffle(std::span<NodePair>(seq));
  return out;
}

SolSolver::SolSolver(const BitMatrix& m, const BitVector& u0, const BitVector& v0,
                     double p, const St3Factory& factory, std::uint64_t seed)
    : layout_(static_cast<NodeId>(m.rows())),
      p_(p),
      t_(sol_horizon(m.rows(), p)),
      rng_(Rng::stream(seed, streams::kSequence)),
      u_prev_(u0),
      v_prev_(v0) {
  const DynamicGraph g0 = layout_.mirror(m, u0, v0);
  for (std::size_t j = 0; j < 3; ++j) {
    copies_[j] = factory(layout_, Rng::mix64(seed ^ (j + 1)));
    copies_[j]->preprocess(g0);
  }
}

bool SolSolver::initial_answer() { return copies_[0]->query() % 2 == 1; }

bool SolSolver::round(const BitVector& u, const BitVector& v) {
  last_ = reduction_steps(layout_, p_, t_, xor_bits(u, u_prev_), xor_bits(v, v_prev_), rng_);
  std::uint64_t sum = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    for (const NodePair& e : last_.sequences[j]) copies_[j]->flip(e);
    updates_ += last_.sequences[j].size();
    sum += copies_[j]->query();
  }
  u_prev_ = u;
  v_prev_ = v;
  return sum % 2 == 1;
}

std::uint64_t SolSolver::ops() const {
  std::uint64_t total = 0;
  for (const auto& copy : copies_) total += copy->ops();
  return total;
}

SolReport sol_solve(const OuMvInstance& instance, double p, const St3Factory& factory,
                    std::uint64_t seed) {
  if (instance.rounds.empty()) throw ParameterError("OuMv instance has no rounds");
  const auto& [u0, v0] = instance.rounds.front();
  SolSolver solver(instance.m, u0, v0, p, factory, seed);
  SolReport report;
  for (std::size_t i = 0; i < instance.rounds.size(); ++i) {
    const auto& [u, v] = instance.rounds[i];
    const bool answer = i == 0 ? solver.initial_answer() : solver.round(u, v);
    const bool expected = f2_oumv_oracle(instance.m, u, v);
    report.answers.push_back(answer);
    report.expected.push_back(expected);
    if (answer != expected) ++report.errors;
  }
  report.updates = solver.updates();
  return report;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t type_slot(EdgeType type) {
  switch (type) {
    case EdgeType::SA: return 0;
    case EdgeType::AB: return 1;
    case EdgeType::BT: return 2;
    default: throw InvariantViolation("exterior pair in a P3 sequence");
  }
}

/// Histogram over [lo, hi] of both samples.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> joint_histograms(
    const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::uint64_t lo = ~std::uint64_t{0};
  std::uint64_t hi = 0;
  for (const auto* values : {&a, &b}) {
    for (std::uint64_t x : *values) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  std::vector<std::uint64_t> ha(hi - lo + 1, 0);
  std::vector<std::uint64_t> hb(hi - lo + 1, 0);
  for (std::uint64_t x : a) ++ha[x - lo];
  for (std::uint64_t x : b) ++hb[x - lo];
  return {ha, hb};
}

}  // namespace

HistogramCheck dadvp_verify_histogram(double p, NodeId n, std::size_t samples,
                                      std::uint64_t seed) {
  const P3Layout layout(n);
  const DAdvP dadv(p, n);
  const std::uint64_t t = sol_horizon(n, p);
  const double odd_side = 1.0 - poisson_even_mass(dadv.q_side() * static_cast<double>(t));
  Rng genuine_rng = Rng::stream(seed, 1);
  Rng synthetic_rng = Rng::stream(seed, 2);
  HistogramCheck check;
  std::vector<std::uint64_t> genuine_lengths;
  std::vector<std::uint64_t> synthetic_lengths;
  for (std::size_t k = 0; k < samples; ++k) {
    const std::uint64_t length = poisson_sample(static_cast<double>(t), genuine_rng);
    for (std::uint64_t i = 0; i < length; ++i) {
      ++check.genuine_types[type_slot(layout.classify(dadv.sample(layout, genuine_rng)))];
    }
    genuine_lengths.push_back(length);

    // Parity vectors distributed as the parities of a genuine histogram.
    BitVector u_dif(n);
    BitVector v_dif(n);
    for (auto& bit : u_dif) bit = synthetic_rng.bernoulli(odd_side);
    for (auto& bit : v_dif) bit = synthetic_rng.bernoulli(odd_side);
    const ReductionOutput out = reduction_steps(layout, p, t, u_dif, v_dif, synthetic_rng);
    for (const NodePair& e : out.sequences[0]) {
      ++check.synthetic_types[type_slot(layout.classify(e))];
    }
    synthetic_lengths.push_back(out.sequences[0].size());
  }
  std::vector<std::uint64_t> a(check.synthetic_types.begin(), check.synthetic_types.end());
  std::vector<std::uint64_t> b(check.genuine_types.begin(), check.genuine_types.end());
  // Drop types that neither source produced (AB at p = 1).
  std::vector<std::uint64_t> a_kept;
  std::vector<std::uint64_t> b_kept;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] + b[i] > 0) {
      a_kept.push_back(a[i]);
      b_kept.push_back(b[i]);
    }
  }
  check.types = chi2_homogeneity(a_kept, b_kept);
  const auto [ha, hb] = joint_histograms(synthetic_lengths, genuine_lengths);
  check.lengths = chi2_homogeneity(ha, hb);
  return check;
}

std::array<ChiSquareResult, 3> poissonization_check(double p, NodeId n,
                                                    std::size_t samples,
                                                    std::uint64_t seed) {
  const P3Layout layout(n);
  const DAdvP dadv(p, n);
  const std::uint64_t t = sol_horizon(n, p);
  const std::array<NodePair, 3> probes = {NodePair(layout.s(), layout.a(0)),
                                          NodePair(layout.a(0), layout.b(0)),
                                          NodePair(layout.b(0), layout.t())};
  Rng sequence_rng = Rng::stream(seed, 1);
  Rng direct_rng = Rng::stream(seed, 2);
  std::array<std::vector<std::uint64_t>, 3> from_sequences;
  std::array<std::vector<std::uint64_t>, 3> direct;
  for (std::size_t k = 0; k < samples; ++k) {
    std::array<std::uint64_t, 3> counts{};
    const std::uint64_t length = poisson_sample(static_cast<double>(t), sequence_rng);
    for (std::uint64_t i = 0; i < length; ++i) {
      const NodePair e = dadv.sample(layout, sequence_rng);
      for (std::size_t j = 0; j < 3; ++j) counts[j] += e == probes[j] ? 1 : 0;
    }
    for (std::size_t j = 0; j < 3; ++j) {
      from_sequences[j].push_back(counts[j]);
      direct[j].push_back(poisson_sample(
          dadv.probability(layout, probes[j]) * static_cast<double>(t), direct_rng));
    }
  }
  std::array<ChiSquareResult, 3> results;
  for (std::size_t j = 0; j < 3; ++j) {
    const auto [ha, hb] = joint_histograms(from_sequences[j], direct[j]);
    results[j] = ha.size() < 2 ? ChiSquareResult{} : chi2_homogeneity(ha, hb);
  }
  return results;
}

// ---------------------------------------------------------------------------

bool omv_parity_reduction(const BitMatrix& m, const BitVector& u, const BitVector& v,
                          const ParitySolver& solver, int repetitions, Rng& rng) {
  check_dims(m, u, v);
  for (int r = 0; r < repetitions; ++r) {
    BitMatrix zeroed = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m.at(i, j) && rng.bernoulli(0.5)) zeroed.set(i, j, 0);
      }
    }
    if (solver(zeroed, u, v)) return true;
  }
  return false;
}

bool worstcase_to_average_split(const BitMatrix& m, const BitVector& u,
                                const BitVector& v, const ParitySolver& solver,
                                Rng& rng) {
  check_dims(m, u, v);
  const BitMatrix m1 = BitMatrix::random(m.rows(), rng);
  const std::array<BitMatrix, 2> ms = {m1, m + m1};
  const BitVector u1 = random_bits(u.size(), rng);
  const std::array<BitVector, 2> us = {u1, xor_bits(u, u1)};
  const BitVector v1 = random_bits(v.size(), rng);
  const std::array<BitVector, 2> vs = {v1, xor_bits(v, v1)};
  bool parity = false;
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) {
      for (int b3 = 0; b3 < 2; ++b3) parity ^= solver(ms[b2], us[b1], vs[b3]);
    }
  }
  return parity;
}

}  // namespace smoothdyn

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

#include <array>
#include <vector>

#include "smoothdyn/errors.hpp"
#include "smoothdyn/harness.hpp"
#include "smoothdyn/oracles.hpp"
#include "smoothdyn/p3_general.hpp"

using namespace smoothdyn;
using Q = boost::rational<long long>;

namespace {

/// sA: (s,a0). AB: (a0,b0), (a0,b1), (a1,b2). Bt: (b0,t), (b1,t).
DynamicGraph fixture(const P3Layout& l) {
  DynamicGraph g(l.node_count());
  g.add({l.s(), l.a(0)});
  g.add({l.a(0), l.b(0)});
  g.add({l.a(0), l.b(1)});
  g.add({l.a(1), l.b(2)});
  g.add({l.b(0), l.t()});
  g.add({l.b(1), l.t()});
  return g;
}

int slot_of(EdgeType type) {
  switch (type) {
    case EdgeType::SB: return 0;
    case EdgeType::AT: return 1;
    case EdgeType::AA: return 2;
    case EdgeType::BB: return 3;
    default: return -1;
  }
}

/// Sixteen graphs built by hand: pair k of a partitioned type goes to part
/// (k * 7 + salt) % 2, and graph i takes part bit i of each type.
std::uint64_t sixteen_sum(const P3Layout& l, const DynamicGraph& interior, unsigned salt,
                          bool with_st) {
  std::uint64_t sum = 0;
  for (unsigned i = 0; i < 16; ++i) {
    DynamicGraph g = interior;
    for (std::uint64_t k = 0; k < pair_count(l.node_count()); ++k) {
      const NodePair e = pair_from_index(k);
      const int slot = slot_of(l.classify(e));
      if (slot < 0) continue;
      const unsigned part = (k * 7 + salt + (k >> 2)) % 2;
      if (((i >> slot) & 1U) == part) g.add(e);
    }
    if (with_st) g.add({l.s(), l.t()});
    sum += bf_st_paths(g, l.s(), l.t(), 3);
  }
  return sum;
}

}  // namespace

TEST_SUITE("p3_general") {

TEST_CASE("alpha") {
  // n = 2: 8 interior pairs, 15 - 8 = 7 exterior.
  const AlphaExact half = alpha_of_exact(Q(1, 2), 2);
  CHECK(half.alpha == Q(8) / (Q(8) + Q(7, 2)));
  CHECK(half.p_prime == half.alpha * Q(1, 2));
  CHECK(alpha_of_exact(Q(1), 5).alpha == Q(1));
  const Alpha a = alpha_of(0.5, 2);
  CHECK(a.alpha == doctest::Approx(16.0 / 23.0));
  CHECK(a.p_prime == doctest::Approx(8.0 / 23.0));
  for (NodeId n : {2u, 6u, 30u}) {
    for (double p : {0.0, 0.4, 1.0}) {
      const AlphaExact exact = alpha_of_exact(Q(static_cast<long long>(p * 10), 10), n);
      CHECK(alpha_of(p, n).alpha ==
            doctest::Approx(boost::rational_cast<double>(exact.alpha)));
    }
  }
  CHECK_THROWS_AS(alpha_of(1.5, 3), ParameterError);
  CHECK_THROWS_AS(alpha_of_exact(Q(1, 2), 0), ParameterError);
}

TEST_CASE("hand-built sixteen graphs satisfy the recombination identity") {
  const P3Layout l(3);
  const DynamicGraph g = fixture(l);
  CHECK(bf_st_paths(g, l.s(), l.t(), 3) == 2);
  for (unsigned salt : {0u, 1u}) {
    for (bool with_st : {false, true}) {
      // 16 * 2 + 4 * 3 + 4 * (3 - 1) * (1 + 2)
      CHECK(sixteen_sum(l, g, salt, with_st) == 68);
    }
  }
}

TEST_CASE("pack recombines the fixture") {
  const P3Layout l(3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SixteenPack pack(l, 0.5, fixture(l), exact_st3_factory(), seed);
    CHECK(pack.properly_partitioned());
    const Recombination r = pack.recombine();
    CHECK(r.sum == 68);
    CHECK(r.c_ab == 3);
    CHECK(r.c_sa == 1);
    CHECK(r.c_bt == 2);
    CHECK(r.numerator == 32);
    CHECK(r.count == 2);
    std::uint64_t direct = 0;
    for (std::size_t i = 0; i < SixteenPack::kGraphs; ++i) {
      direct += bf_st_paths(pack.graph(i), l.s(), l.t(), 3);
    }
    CHECK(direct == r.sum);
  }
}

TEST_CASE("graph i takes part bit i of each partitioned type") {
  CHECK(SixteenPack::part_bit(0b1010, 0) == 0);
  CHECK(SixteenPack::part_bit(0b1010, 1) == 1);
  CHECK(SixteenPack::part_bit(0b1010, 3) == 1);
  const P3Layout l(3);
  SixteenPack pack(l, 0.5, fixture(l), exact_st3_factory(), 4);
  for (const NodePair& f : l.exterior_pairs()) {
    const int slot = slot_of(l.classify(f));
    std::vector<std::size_t> holders;
    for (std::size_t i = 0; i < 16; ++i) {
      if (pack.graph(i).has_edge(f)) holders.push_back(i);
    }
    if (slot < 0) {
      CHECK((holders.empty() || holders.size() == 16));
      continue;
    }
    REQUIRE(holders.size() == 8);
    const int part = SixteenPack::part_bit(holders.front(), static_cast<std::size_t>(slot));
    for (std::size_t i : holders) CHECK(SixteenPack::part_bit(i, slot) == part);
  }
}

TEST_CASE("pack tracks random interior flips") {
  const NodeId n = 4;
  const P3Layout l(n);
  Rng rng(5);
  for (const auto& inner : {exact_st3_factory(), incremental_st3_factory()}) {
    SixteenPack pack(l, 0.5, DynamicGraph(l.node_count()), inner, 6);
    const DAdvP dadv(0.5, n);
    for (int step = 0; step < 300; ++step) {
      pack.feed(dadv.sample(l, rng));
      REQUIRE(pack.query() == bf_st_paths(pack.interior_graph(), l.s(), l.t(), 3));
      REQUIRE(pack.properly_partitioned());
    }
    CHECK(pack.exterior_steps() > 0);
    CHECK(pack.total_steps() == pack.exterior_steps() + 300);
  }
}

TEST_CASE("interior flips make up an alpha fraction") {
  const NodeId n = 6;
  const P3Layout l(n);
  SixteenPack pack(l, 0.3, DynamicGraph(l.node_count()), exact_st3_factory(), 7);
  Rng rng(8);
  const int feeds = 4000;
  for (int i = 0; i < feeds; ++i) {
    pack.feed(l.interior_pairs()[rng.bounded(l.interior_pairs().size())]);
  }
  const double fraction = feeds / static_cast<double>(pack.total_steps());
  CHECK(fraction == doctest::Approx(pack.alpha()).epsilon(0.05));
  CHECK(pack.p_prime() == doctest::Approx(pack.alpha() * 0.3));
}

TEST_CASE("skipped exterior flips break the partition") {
  const P3Layout l(4);
  PackOptions options;
  options.skip_graph = 5;
  SixteenPack pack(l, 0.2, DynamicGraph(l.node_count()), exact_st3_factory(), 9, options);
  CHECK(pack.properly_partitioned());
  Rng rng(10);
  const DAdvP dadv(0.2, 4);
  bool broken = false;
  for (int step = 0; step < 200 && !broken; ++step) {
    pack.feed(dadv.sample(l, rng));
    broken = !pack.properly_partitioned();
  }
  CHECK(broken);
  CHECK(pack.partition_defect()->size() > 0);
}

TEST_CASE("harness trial finds no mismatches and catches the fault") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    P3GeneralSpec spec;
    spec.seed = seed;
    const P3GeneralResult result = p3general_trial(spec);
    CHECK(result.mismatches == 0);
    CHECK(result.non_divisible == 0);
    CHECK(result.partition_failures == 0);
    CHECK(result.queries == 20);
  }
  P3GeneralSpec faulty;
  faulty.n = 4;
  faulty.pack.skip_graph = 5;
  const P3GeneralResult result = p3general_trial(faulty);
  CHECK(result.partition_failures > 0);
  CHECK_FALSE(result.first_defect.empty());
}

TEST_CASE("step cap and bad inputs") {
  const P3Layout l(3);
  PackOptions options;
  options.max_steps = 10;
  SixteenPack capped(l, 0.0, DynamicGraph(l.node_count()), exact_st3_factory(), 11, options);
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 100; ++i) capped.feed(l.interior_pairs()[0]);
      }(),
      SamplingError);

  SixteenPack pack(l, 0.5, DynamicGraph(l.node_count()), exact_st3_factory(), 12);
  CHECK_THROWS_AS(pack.feed(NodePair(l.s(), l.t())), ContractViolation);
  CHECK_THROWS_AS(SixteenPack(P3Layout(1), 0.5, DynamicGraph(4), exact_st3_factory(), 1),
                  ParameterError);
  DynamicGraph exterior(l.node_count());
  exterior.add({l.a(0), l.a(1)});
  CHECK_THROWS_AS(SixteenPack(l, 0.5, exterior, exact_st3_factory(), 1), ParameterError);
  PackOptions bad;
  bad.skip_graph = 16;
  CHECK_THROWS_AS(
      SixteenPack(l, 0.5, DynamicGraph(l.node_count()), exact_st3_factory(), 1, bad),
      ParameterError);
}

TEST_CASE("pack factory drives SOL") {
  Rng rng(13);
  const OuMvInstance instance = OuMvInstance::random(4, rng);
  const SolReport report =
      sol_solve(instance, 0.5, pack_st3_factory(0.5, incremental_st3_factory()), 14);
  CHECK(report.errors == 0);
}

}  // TEST_SUITE

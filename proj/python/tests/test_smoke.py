# Copyright 2026 The smoothdyn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools
import math
import random

import networkx as nx
import pytest

import smoothdyn


def test_graph_basics():
    g = smoothdyn.Graph(4)
    assert g.flip(0, 1)
    assert g.has_edge(1, 0)
    assert not g.add(0, 1)
    assert g.edges() == [(0, 1)]
    assert g.remove(1, 0)
    assert g.edge_count == 0
    with pytest.raises(smoothdyn.ParameterError):
        g.flip(2, 2)


def test_counter_matches_networkx_paths():
    n = 9
    rng = random.Random(3)
    counter = smoothdyn.Counter("st3", n, 0, n - 1)
    pairs = list(itertools.combinations(range(n), 2))
    for _ in range(200):
        counter.flip(*rng.choice(pairs))
        nxg = nx.Graph(counter.graph.edges())
        nxg.add_nodes_from(range(n))
        paths = [p for p in nx.all_simple_paths(nxg, 0, n - 1, cutoff=3) if len(p) == 4]
        assert counter.query() == len(paths)
        assert smoothdyn.st_paths(counter.graph, 0, n - 1, 3) == len(paths)


def test_poisson():
    assert smoothdyn.poisson_even_mass(1.0) == pytest.approx((1 + math.exp(-2)) / 2)
    draws = smoothdyn.poisson_samples(1.0, 20000, seed=5)
    assert sum(draws) / len(draws) == pytest.approx(1.0, abs=0.05)


def test_simulate_and_reduce():
    out = smoothdyn.simulate(problem="st3", n=12, p=[0.0, 1.0], T=100, trials=2)
    errors = [r["value"] for r in out["rows"] if r["metric"] == "error_rate"]
    assert errors == [0.0] * 4
    assert smoothdyn.reduce(mode="sol", n=6, p=0.5, instances=2)["passed"]
    with pytest.raises(ValueError):
        smoothdyn.simulate(p=1.5)


def test_verify():
    assert all(s["passed"] for s in smoothdyn.verify())

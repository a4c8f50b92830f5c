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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "smoothdyn/counters.hpp"
#include "smoothdyn/harness.hpp"
#include "smoothdyn/oracles.hpp"
#include "smoothdyn/poisson.hpp"

namespace py = pybind11;
using namespace smoothdyn;

namespace {

std::vector<py::dict> rows_to_dicts(const std::vector<MetricRow>& rows) {
  std::vector<py::dict> out;
  out.reserve(rows.size());
  for (const MetricRow& row : rows) {
    py::dict d;
    d["trial"] = row.trial < 0 ? py::object(py::str("all")) : py::object(py::int_(row.trial));
    d["p"] = row.p;
    d["n"] = row.n;
    d["T"] = row.steps;
    d["problem"] = row.problem;
    d["model"] = row.model;
    d["metric"] = row.metric;
    d["value"] = row.value;
    out.push_back(std::move(d));
  }
  return out;
}

using Command = RunOutput (*)(const ExperimentConfig&);

py::dict run_command(Command command, const std::string& config_json) {
  const RunOutput out = command(parse_config(config_json, "<python>"));
  py::dict d;
  d["rows"] = rows_to_dicts(out.rows);
  d["timing"] = rows_to_dicts(out.timing);
  d["passed"] = out.passed;
  return d;
}

/// Counter bundled with the graph it tracks.
class TrackedCounter {
 public:
  TrackedCounter(const std::string& problem, NodeId n, NodeId s, NodeId t)
      : graph_(n), counter_(make_counter(parse_counter_problem(problem), n, s, t)) {
    counter_->preprocess(graph_);
  }
  void flip(NodeId a, NodeId b) {
    const NodePair e(a, b);
    counter_->update(graph_, e, !graph_.has_edge(e));
    graph_.flip(e);
  }
  std::uint64_t query() const { return counter_->query(); }
  const DynamicGraph& graph() const { return graph_; }
  std::uint64_t expensive() const { return counter_->stats().expensive; }

 private:
  DynamicGraph graph_;
  std::unique_ptr<DynamicCounter> counter_;
};

}  // namespace

PYBIND11_MODULE(_smoothdyn, m) {
  m.doc() = "Smoothed dynamic graph simulation and counting";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);
  py::register_exception<SamplingError>(m, "SamplingError", PyExc_RuntimeError);

  py::class_<DynamicGraph>(m, "Graph")
      .def(py::init<NodeId>(), py::arg("n"))
      .def_property_readonly("n", &DynamicGraph::node_count)
      .def_property_readonly("edge_count", &DynamicGraph::edge_count)
      .def("has_edge", py::overload_cast<NodeId, NodeId>(&DynamicGraph::has_edge, py::const_))
      .def("flip", [](DynamicGraph& g, NodeId a, NodeId b) { return g.flip({a, b}); })
      .def("add", [](DynamicGraph& g, NodeId a, NodeId b) { return g.add({a, b}); })
      .def("remove", [](DynamicGraph& g, NodeId a, NodeId b) { return g.remove({a, b}); })
      .def("degree", &DynamicGraph::degree)
      .def("edges", [](const DynamicGraph& g) {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (const NodePair& e : g.edges()) out.emplace_back(e.u(), e.v());
        return out;
      });

  py::class_<TrackedCounter>(m, "Counter")
      .def(py::init<const std::string&, NodeId, NodeId, NodeId>(), py::arg("problem"),
           py::arg("n"), py::arg("s") = 0, py::arg("t") = 1)
      .def("flip", &TrackedCounter::flip)
      .def("query", &TrackedCounter::query)
      .def_property_readonly("graph", &TrackedCounter::graph)
      .def_property_readonly("expensive_updates", &TrackedCounter::expensive);

  m.def("st_paths", &bf_st_paths, py::arg("graph"), py::arg("s"), py::arg("t"), py::arg("k"));
  m.def("s_cycles", &bf_s_cycles, py::arg("graph"), py::arg("s"), py::arg("k"));
  m.def("connected", &bf_connected, py::arg("graph"));

  m.def("poisson_even_mass", &poisson_even_mass, py::arg("lam"));
  m.def(
      "poisson_samples",
      [](double lambda, std::size_t count, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<std::uint64_t> out(count);
        for (auto& k : out) k = poisson_sample(lambda, rng);
        return out;
      },
      py::arg("lam"), py::arg("count"), py::arg("seed") = 1);
  m.def("expected_expensive_fraction", &expected_expensive_fraction, py::arg("p"),
        py::arg("n"));

  m.def(
      "simulate", [](const std::string& c) { return run_command(cmd_simulate, c); },
      py::arg("config_json") = "{}");
  m.def(
      "bench", [](const std::string& c) { return run_command(cmd_bench, c); },
      py::arg("config_json") = "{}");
  m.def(
      "reduce", [](const std::string& c) { return run_command(cmd_reduce, c); },
      py::arg("config_json") = "{}");
  m.def("verify", [] {
    const VerifyReport report = cmd_verify();
    std::vector<py::dict> suites;
    for (const SuiteResult& s : report.suites) {
      py::dict d;
      d["name"] = s.name;
      d["passed"] = s.passed;
      d["detail"] = s.detail;
      suites.push_back(std::move(d));
    }
    return suites;
  });
}

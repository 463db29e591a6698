// Python bindings: graph construction and generation, robustness estimation,
// spectral quantities, baseline edge selection, episode runs, and the
// experiment-table runner, mirroring the C++ API with seeds in place of
// explicit RNG streams.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "robustnet/baselines.hpp"
#include "robustnet/datagen.hpp"
#include "robustnet/graph.hpp"
#include "robustnet/graph_io.hpp"
#include "robustnet/harness.hpp"
#include "robustnet/mdp.hpp"
#include "robustnet/rng.hpp"
#include "robustnet/robustness.hpp"
#include "robustnet/spectral.hpp"

namespace py = pybind11;
using namespace robustnet;

namespace {

Objective objective_from(const std::string& name) {
  if (name == "random") return Objective::RandomRemoval;
  if (name == "targeted") return Objective::TargetedRemoval;
  throw std::invalid_argument("objective must be 'random' or 'targeted', got '" + name + "'");
}

BaselineKind baseline_from(const std::string& name) {
  if (name == "random") return BaselineKind::Random;
  if (name == "greedy") return BaselineKind::Greedy;
  if (name == "ldp") return BaselineKind::Ldp;
  if (name == "fv") return BaselineKind::Fv;
  if (name == "eres") return BaselineKind::ERes;
  throw std::invalid_argument("unknown baseline '" + name + "'");
}

std::pair<int, int> as_pair(NodePair e) { return {e.u, e.v}; }

std::vector<std::pair<int, int>> edge_pairs(const Graph& g) {
  std::vector<std::pair<int, int>> out;
  for (const NodePair& e : g.edges()) out.push_back(as_pair(e));
  return out;
}

Graph graph_from_pairs(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<NodePair> es;
  es.reserve(edges.size());
  for (const auto& [u, v] : edges) es.push_back(NodePair::of(u, v));
  return Graph::from_edges(n, es);
}

py::dict cell_to_dict(const TableCell& c) {
  py::dict d;
  d["data"] = c.data_label;
  d["budget"] = c.budget;
  d["agent"] = agent_name(c.agent);
  d["n_seeds"] = c.n_seeds;
  d["mean"] = c.mean;
  d["ci95"] = c.ci95;
  d["best"] = c.best;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph robustness improvement: core operations";

  py::class_<Graph>(m, "Graph")
      .def(py::init<int>(), py::arg("n"))
      .def_static(
          "from_edges",
          [](int n, const std::vector<std::pair<int, int>>& edges) {
            return graph_from_pairs(n, edges);
          },
          py::arg("n"), py::arg("edges"))
      .def("node_count", &Graph::node_count)
      .def("live_node_count", &Graph::live_node_count)
      .def("edge_count", &Graph::edge_count)
      .def("is_connected", &Graph::is_connected)
      .def("is_alive", &Graph::is_alive, py::arg("v"))
      .def(
          "neighbors",
          [](const Graph& g, int v) {
            const auto ns = g.neighbors(v);
            return std::vector<int>(ns.begin(), ns.end());
          },
          py::arg("v"))
      .def("edges", &edge_pairs)
      .def(
          "add_edge", [](Graph& g, int u, int v) { g.add_edge(NodePair::of(u, v)); },
          py::arg("u"), py::arg("v"))
      .def(
          "with_edge", [](const Graph& g, int u, int v) { return g.with_edge(NodePair::of(u, v)); },
          py::arg("u"), py::arg("v"))
      .def("remove_node", &Graph::remove_node, py::arg("v"))
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "Graph(" + std::to_string(g.live_node_count()) + " nodes, " +
               std::to_string(g.edge_count()) + " edges)";
      });

  m.def("path_graph", &path_graph, py::arg("n"));
  m.def("cycle_graph", &cycle_graph, py::arg("n"));
  m.def("star_graph", &star_graph, py::arg("n"));
  m.def("complete_graph", &complete_graph, py::arg("n"));

  m.def(
      "generate_ba",
      [](int n, int m_attach, std::uint64_t seed) {
        Rng rng(seed);
        return generate_ba(n, m_attach, rng);
      },
      py::arg("n"), py::arg("m"), py::arg("seed"),
      "Preferential-attachment graph: m edges per arriving node.");
  m.def(
      "generate_er_connected",
      [](int n, double edge_fraction, std::uint64_t seed) {
        Rng rng(seed);
        return generate_er_connected(n, edge_fraction, rng);
      },
      py::arg("n"), py::arg("edge_fraction"), py::arg("seed"),
      "Uniform connected graph with round(fraction * n(n-1)/2) edges.");

  m.def("read_edge_list_file", &read_edge_list_file, py::arg("path"));
  m.def("write_edge_list_file", &write_edge_list_file, py::arg("graph"), py::arg("path"));
  m.def(
      "load_and_prepare",
      [](const std::string& path, int min_n, int max_n) {
        PreparedGraph p = load_and_prepare(path, min_n, max_n);
        return py::make_tuple(p.graph, p.original_labels);
      },
      py::arg("path"), py::arg("min_n") = 20, py::arg("max_n") = 50,
      "Largest connected component, relabeled contiguously; returns (graph, original_labels).");

  m.def(
      "estimate_robustness",
      [](const Graph& g, const std::string& objective, int n_sims, std::uint64_t seed,
         int workers) {
        Rng rng(seed);
        const RobustnessEstimate est =
            estimate_robustness(g, strategy_for(objective_from(objective)), n_sims, rng, workers);
        return py::make_tuple(est.mean, est.std_error, est.n_sims);
      },
      py::arg("graph"), py::arg("objective"), py::arg("n_sims"), py::arg("seed"),
      py::arg("workers") = -1,
      "Monte Carlo expected critical fraction; returns (mean, std_error, n_sims).");
  m.def(
      "exact_robustness",
      [](const Graph& g, const std::string& objective, int max_nodes) {
        return exact_robustness(g, strategy_for(objective_from(objective)), max_nodes);
      },
      py::arg("graph"), py::arg("objective"), py::arg("max_nodes") = 8,
      "Exhaustive expected critical fraction for small graphs.");

  m.def("budget_from_edge_percent", &budget_from_edge_percent, py::arg("tau_percent"),
        py::arg("n"));

  m.def("laplacian", &laplacian, py::arg("graph"));
  m.def("fiedler_vector", &fiedler_vector, py::arg("graph"));
  m.def("laplacian_pseudoinverse", &laplacian_pseudoinverse, py::arg("graph"));
  m.def(
      "effective_resistance",
      [](const Graph& g, int u, int v) {
        return effective_resistance(laplacian_pseudoinverse(g), u, v);
      },
      py::arg("graph"), py::arg("u"), py::arg("v"));
  m.def(
      "algebraic_connectivity",
      [](const Graph& g) { return eigh(laplacian(g)).eigenvalues(1); }, py::arg("graph"),
      "Second-smallest Laplacian eigenvalue.");

  m.def("select_edge_ldp", [](const Graph& g) { return as_pair(select_edge_ldp(g)); },
        py::arg("graph"));
  m.def("select_edge_fv", [](const Graph& g) { return as_pair(select_edge_fv(g)); },
        py::arg("graph"));
  m.def("select_edge_eres", [](const Graph& g) { return as_pair(select_edge_eres(g)); },
        py::arg("graph"));
  m.def(
      "select_edge_random",
      [](const Graph& g, std::uint64_t seed) {
        Rng rng(seed);
        return as_pair(select_edge_random(g, rng));
      },
      py::arg("graph"), py::arg("seed"));
  m.def(
      "select_edge_greedy",
      [](const Graph& g, const std::string& objective, int n_sims, std::uint64_t seed,
         int workers) {
        Rng rng(seed);
        return as_pair(select_edge_greedy(g, objective_from(objective), n_sims, rng, workers));
      },
      py::arg("graph"), py::arg("objective"), py::arg("n_sims"), py::arg("seed"),
      py::arg("workers") = -1);

  m.def(
      "run_baseline",
      [](const Graph& g, const std::string& agent, const std::string& objective, int budget,
         int n_sims, std::uint64_t seed, int workers) {
        EpisodeConfig cfg;
        cfg.objective = objective_from(objective);
        cfg.budget = budget;
        cfg.n_sims = n_sims;
        cfg.workers = workers;
        Rng rng(seed);
        EpisodeResult r = run_baseline(g, baseline_from(agent), cfg, rng);
        return py::make_tuple(r.final_graph, r.total_reward);
      },
      py::arg("graph"), py::arg("agent"), py::arg("objective"), py::arg("budget"),
      py::arg("n_sims") = 0, py::arg("seed") = 1, py::arg("workers") = -1,
      "One edge-addition episode; returns (final_graph, total_reward).");

  m.def(
      "run_table",
      [](const std::string& config_json) {
        const ExperimentConfig cfg = parse_experiment_config(config_json);
        std::vector<py::dict> out;
        for (const TableCell& c : run_table(cfg)) out.push_back(cell_to_dict(c));
        return out;
      },
      py::arg("config_json"),
      "Run the comparison grid described by a JSON config string; returns summary rows.");

  m.attr("__version__") = "1.0.0";
}

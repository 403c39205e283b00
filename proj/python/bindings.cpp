#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "sdiff/cli.hpp"
#include "sdiff/decompose.hpp"
#include "sdiff/exact.hpp"
#include "sdiff/generators.hpp"
#include "sdiff/heuristics.hpp"
#include "sdiff/io.hpp"
#include "sdiff/simulate.hpp"
#include "sdiff/treewidth.hpp"

namespace py = pybind11;
using namespace sdiff;

namespace {

NodeSet to_set(const InfluenceNetwork& net, const std::vector<NodeId>& nodes) {
    NodeSet s(net.size());
    for (NodeId v : nodes) {
        if (v >= net.size()) throw ValidationError("active node " + std::to_string(v) + " out of range");
        s.insert(v);
    }
    return s;
}

TieBreak tie_break(std::optional<std::uint64_t> seed) {
    return seed ? TieBreak::random(*seed) : TieBreak::smallest_id();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Expected-time optimal activation sequences on influence networks";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<GuardError>(m, "GuardError", PyExc_RuntimeError);
    py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Edge>(m, "Edge")
        .def(py::init<NodeId, NodeId, double, double>(), py::arg("u"), py::arg("v"), py::arg("w_uv") = 1.0,
             py::arg("w_vu") = 1.0)
        .def_readwrite("u", &Edge::u)
        .def_readwrite("v", &Edge::v)
        .def_readwrite("w_uv", &Edge::w_uv)
        .def_readwrite("w_vu", &Edge::w_vu)
        .def("__eq__", [](const Edge& a, const Edge& b) { return a == b; })
        .def("__repr__", [](const Edge& e) {
            std::ostringstream os;
            os << "Edge(" << e.u << ", " << e.v << ", " << e.w_uv << ", " << e.w_vu << ")";
            return os.str();
        });

    py::class_<InfluenceNetwork>(m, "InfluenceNetwork")
        .def(py::init<std::size_t, std::vector<Edge>, std::vector<double>>(), py::arg("n"),
             py::arg("edges") = std::vector<Edge>{}, py::arg("external") = std::vector<double>{})
        .def("__len__", &InfluenceNetwork::size)
        .def_property_readonly("size", &InfluenceNetwork::size)
        .def_property_readonly("edges",
                               [](const InfluenceNetwork& n) { return std::vector<Edge>(n.edges().begin(), n.edges().end()); })
        .def_property_readonly("external", [](const InfluenceNetwork& n) {
            return std::vector<double>(n.external().begin(), n.external().end());
        })
        .def("neighbors",
             [](const InfluenceNetwork& n, NodeId i) {
                 std::vector<NodeId> out;
                 for (const Arc& a : n.neighbors(i)) out.push_back(a.node);
                 return out;
             })
        .def("degree", &InfluenceNetwork::degree)
        .def("has_edge", &InfluenceNetwork::has_edge)
        .def("influence", &InfluenceNetwork::influence, py::arg("source"), py::arg("target"))
        .def("total_influence", &InfluenceNetwork::total_influence)
        .def("validate", &InfluenceNetwork::validate)
        .def("__eq__", [](const InfluenceNetwork& a, const InfluenceNetwork& b) { return a == b; });

    py::class_<DiffusionInstance>(m, "DiffusionInstance")
        .def(py::init([](InfluenceNetwork net, NodeId seed, std::optional<std::size_t> z, double alpha, double beta) {
                 DiffusionInstance inst;
                 inst.z = z.value_or(net.size());
                 inst.network = std::move(net);
                 inst.seed = seed;
                 inst.alpha = alpha;
                 inst.beta = beta;
                 return inst;
             }),
             py::arg("network"), py::arg("seed") = 0, py::arg("z") = py::none(), py::arg("alpha") = 1.0,
             py::arg("beta") = 1.0)
        .def_readwrite("network", &DiffusionInstance::network)
        .def_readwrite("seed", &DiffusionInstance::seed)
        .def_readwrite("z", &DiffusionInstance::z)
        .def_readwrite("alpha", &DiffusionInstance::alpha)
        .def_readwrite("beta", &DiffusionInstance::beta)
        .def("validate", &DiffusionInstance::validate)
        .def("to_json", [](const DiffusionInstance& inst) { return instance_to_json(inst).dump(); })
        .def_static("from_json",
                    [](const std::string& text) { return instance_from_json(nlohmann::json::parse(text)); })
        .def_static("load", &load_instance)
        .def("save", [](const DiffusionInstance& inst, const std::filesystem::path& p) { save_instance(inst, p); });

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("sequence", &SolveResult::sequence)
        .def_readonly("total_time", &SolveResult::total_time)
        .def_readonly("step_times", &SolveResult::step_times)
        .def_property_readonly("feasible", &SolveResult::feasible)
        .def("to_json", [](const SolveResult& r) { return result_to_json(r).dump(); })
        .def("__repr__", [](const SolveResult& r) {
            std::ostringstream os;
            os.precision(17);
            os << "SolveResult(total_time=" << r.total_time << ", sequence=[";
            for (std::size_t i = 0; i < r.sequence.size(); ++i) os << (i ? ", " : "") << r.sequence[i];
            os << "])";
            return os.str();
        });

    m.def(
        "activation_probability",
        [](const InfluenceNetwork& net, const std::vector<NodeId>& active, NodeId i, double alpha, double beta) {
            return activation_probability(net, to_set(net, active), i, alpha, beta);
        },
        py::arg("network"), py::arg("active"), py::arg("node"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0);
    m.def(
        "expected_step_time",
        [](const InfluenceNetwork& net, const std::vector<NodeId>& active, NodeId i, double alpha, double beta) {
            return expected_step_time(net, to_set(net, active), i, alpha, beta);
        },
        py::arg("network"), py::arg("active"), py::arg("node"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0);
    m.def(
        "sequence_time",
        [](const DiffusionInstance& inst, const std::vector<NodeId>& seq) { return sequence_time(inst, seq); },
        py::arg("instance"), py::arg("sequence"));

    m.def(
        "brute_force_optimal",
        [](const DiffusionInstance& inst, std::size_t max_nodes, bool force) {
            return brute_force_optimal(inst, {max_nodes, force});
        },
        py::arg("instance"), py::arg("max_nodes") = 10, py::arg("force") = false);
    m.def(
        "dp_optimal", [](const DiffusionInstance& inst, std::size_t max_nodes) { return dp_optimal(inst, {max_nodes}); },
        py::arg("instance"), py::arg("max_nodes") = 28);

    m.def(
        "greedy_sequence",
        [](const DiffusionInstance& inst, std::optional<std::uint64_t> seed) { return greedy_sequence(inst, tie_break(seed)); },
        py::arg("instance"), py::arg("tie_seed") = py::none(),
        "Greedy by activation probability; tie_seed switches to seeded random tie-breaks.");
    m.def(
        "majority_sequence",
        [](const DiffusionInstance& inst, std::optional<std::uint64_t> seed) {
            return majority_sequence(inst, tie_break(seed));
        },
        py::arg("instance"), py::arg("tie_seed") = py::none());
    m.def("strategy_a", &strategy_a, py::arg("instance"));
    m.def("harmonic", &harmonic, py::arg("k"));

    py::class_<TreeDecomposition>(m, "TreeDecomposition")
        .def(py::init([](std::vector<std::vector<NodeId>> bags, std::vector<std::pair<std::size_t, std::size_t>> edges,
                         std::size_t root) { return TreeDecomposition{std::move(bags), std::move(edges), root}; }),
             py::arg("bags"), py::arg("edges"), py::arg("root") = 0)
        .def_readwrite("bags", &TreeDecomposition::bags)
        .def_readwrite("edges", &TreeDecomposition::edges)
        .def_readwrite("root", &TreeDecomposition::root)
        .def_property_readonly("width", &TreeDecomposition::width);
    m.def(
        "validate_decomposition",
        [](const InfluenceNetwork& net, const TreeDecomposition& td) {
            return validate_decomposition(net, td).violations;
        },
        py::arg("network"), py::arg("decomposition"), "List of violations; empty when valid.");
    m.def("min_fill_decomposition", &min_fill_decomposition, py::arg("network"));
    m.def(
        "tw_full_optimal",
        [](const DiffusionInstance& inst, std::optional<TreeDecomposition> td, std::size_t max_closed_bag) {
            return tw_full_optimal(inst, td ? *td : min_fill_decomposition(inst.network), {max_closed_bag});
        },
        py::arg("instance"), py::arg("decomposition") = py::none(), py::arg("max_closed_bag") = 9);
    m.def(
        "tw_partial_optimal",
        [](const DiffusionInstance& inst, std::optional<TreeDecomposition> td, std::size_t max_closed_bag) {
            return tw_partial_optimal(inst, td ? *td : min_fill_decomposition(inst.network), {max_closed_bag});
        },
        py::arg("instance"), py::arg("decomposition") = py::none(), py::arg("max_closed_bag") = 9);

    m.def(
        "biconnected_components",
        [](const InfluenceNetwork& net) {
            auto b = biconnected_components(net);
            return py::make_tuple(b.components, b.cut_nodes);
        },
        py::arg("network"), "(blocks, cut_nodes)");
    m.def(
        "solve_full_via_decomposition",
        [](const DiffusionInstance& inst, std::optional<InnerSolver> inner) {
            if (inner) return solve_full_via_decomposition(inst, *inner);
            return solve_full_via_decomposition(inst, [](const DiffusionInstance& part) { return dp_optimal(part); });
        },
        py::arg("instance"), py::arg("inner") = py::none(), "Blocks are solved with dp_optimal unless inner is given.");

    py::class_<SetCoverInstance>(m, "SetCoverInstance")
        .def(py::init([](std::size_t universe, std::vector<std::vector<std::size_t>> sets, std::optional<std::size_t> k) {
                 return SetCoverInstance{universe, std::move(sets), k};
             }),
             py::arg("universe"), py::arg("sets"), py::arg("k") = py::none())
        .def_readwrite("universe", &SetCoverInstance::universe)
        .def_readwrite("sets", &SetCoverInstance::sets)
        .def_readwrite("k", &SetCoverInstance::k);
    m.def("brute_force_set_cover", &brute_force_set_cover, py::arg("cover"));

    py::class_<HardnessInstance>(m, "HardnessInstance")
        .def_readonly("instance", &HardnessInstance::instance)
        .def_readonly("threshold", &HardnessInstance::threshold);
    m.def(
        "make_np_hardness",
        [](const SetCoverInstance& sc, std::size_t k, bool binary) { return make_np_hardness(sc, k, {binary}); },
        py::arg("cover"), py::arg("k"), py::arg("binary_weights") = false);

    py::class_<InapproxInstance>(m, "InapproxInstance")
        .def_readonly("instance", &InapproxInstance::instance)
        .def_readonly("cover", &InapproxInstance::cover)
        .def_readonly("lambda_", &InapproxInstance::lambda)
        .def_readonly("set_cost", &InapproxInstance::set_cost);
    m.def("make_inapprox", &make_inapprox, py::arg("cover"), py::arg("lambda_") = 1.0);
    m.def(
        "extract_cover",
        [](const InapproxInstance& g, const std::vector<NodeId>& seq) { return extract_cover(g, seq); },
        py::arg("gadget"), py::arg("sequence"));

    m.def("make_gk", &make_gk, py::arg("k"));
    m.def(
        "binarize_weights",
        [](const InfluenceNetwork& net) {
            auto b = binarize_weights(net);
            return py::make_tuple(std::move(b.network), b.offset);
        },
        py::arg("network"), "(network, offset)");
    m.def(
        "random_connected",
        [](std::size_t n, double p, double lo, double hi, bool integral, std::uint64_t seed) {
            return random_connected(n, p, {lo, hi, integral}, seed);
        },
        py::arg("n"), py::arg("edge_prob"), py::arg("w_min") = 1.0, py::arg("w_max") = 1.0,
        py::arg("integral") = false, py::arg("rng_seed") = 0);
    m.def(
        "random_tree",
        [](std::size_t n, std::size_t max_degree, double lo, double hi, bool integral, std::uint64_t seed) {
            return random_tree(n, max_degree, {lo, hi, integral}, seed);
        },
        py::arg("n"), py::arg("max_degree"), py::arg("w_min") = 1.0, py::arg("w_max") = 1.0,
        py::arg("integral") = false, py::arg("rng_seed") = 0);
    m.def(
        "random_partial_two_tree",
        [](std::size_t n, std::size_t max_degree, double lo, double hi, bool integral, std::uint64_t seed) {
            return random_partial_two_tree(n, max_degree, {lo, hi, integral}, seed);
        },
        py::arg("n"), py::arg("max_degree"), py::arg("w_min") = 1.0, py::arg("w_max") = 1.0,
        py::arg("integral") = false, py::arg("rng_seed") = 0);

    py::class_<SimulationSummary>(m, "SimulationSummary")
        .def_readonly("mean", &SimulationSummary::mean)
        .def_readonly("std_error", &SimulationSummary::std_error)
        .def_readonly("trials", &SimulationSummary::trials)
        .def_readonly("min", &SimulationSummary::min)
        .def_readonly("max", &SimulationSummary::max)
        .def_readonly("analytic", &SimulationSummary::analytic);
    m.def(
        "simulate_sequence",
        [](const DiffusionInstance& inst, const std::vector<NodeId>& seq, std::size_t trials, std::uint64_t seed,
           std::size_t workers) {
            py::gil_scoped_release release;
            return simulate_sequence(inst, seq, {trials, seed, workers});
        },
        py::arg("instance"), py::arg("sequence"), py::arg("trials") = 100000, py::arg("rng_seed") = 0,
        py::arg("workers") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line front end; returns (exit_code, stdout, stderr).");
}

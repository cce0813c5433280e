#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kwgraph/commands.hpp"
#include "kwgraph/errors.hpp"
#include "kwgraph/oracle.hpp"
#include "kwgraph/problem_io.hpp"
#include "kwgraph/solvers.hpp"

namespace py = pybind11;
using namespace kwg;

namespace {

VertexFunction vf(const Eigen::VectorXd& v) { return VertexFunction(v); }

WeightedGraph make_graph(const std::vector<std::pair<std::string, double>>& vertices,
                         const std::vector<std::tuple<std::string, std::string, double>>& edges) {
    std::vector<VertexSpec> vs;
    for (const auto& [id, mu] : vertices) vs.push_back({id, mu});
    std::vector<EdgeSpec> es;
    for (const auto& [a, b, w] : edges) es.push_back({a, b, w});
    return WeightedGraph::build(vs, es);
}

}  // namespace

PYBIND11_MODULE(_kwgraph, m) {
    m.doc() = "Kazdan-Warner equation on finite weighted graphs";
    py::register_exception<KwError>(m, "KWError", PyExc_RuntimeError);

    py::class_<WeightedGraph>(m, "WeightedGraph")
        .def(py::init(&make_graph), py::arg("vertices"), py::arg("edges"),
             "vertices: [(id, mu)], edges: [(id, id, weight)]")
        .def_property_readonly("size", &WeightedGraph::size)
        .def_property_readonly("ids", &WeightedGraph::ids)
        .def_property_readonly("measures", &WeightedGraph::measures)
        .def_property_readonly("stiffness", &WeightedGraph::stiffness)
        .def_property_readonly("total_measure", &WeightedGraph::total_measure);

    py::class_<KWProblem>(m, "KWProblem")
        .def(py::init([](const WeightedGraph& g, const Eigen::VectorXd& kappa, const Eigen::VectorXd& K,
                         double lambda, bool strict) {
                 return KWProblem(g, vf(kappa), vf(K), lambda, strict ? Mode::Strict : Mode::Relaxed);
             }),
             py::arg("graph"), py::arg("kappa"), py::arg("K"), py::arg("lambda_") = 0.0, py::arg("strict") = true)
        .def_property_readonly("graph", &KWProblem::graph)
        .def_property_readonly("kappa", [](const KWProblem& p) { return p.kappa().values(); })
        .def_property_readonly("K", [](const KWProblem& p) { return p.K().values(); })
        .def_property_readonly("lambda_", &KWProblem::lambda)
        .def_property_readonly("strict", &KWProblem::strict)
        .def_property_readonly("min_K", &KWProblem::min_K)
        .def("with_lambda", &KWProblem::with_lambda);

    py::enum_<Classification>(m, "Classification")
        .value("local_min", Classification::LocalMin)
        .value("saddle", Classification::Saddle)
        .value("unclassified", Classification::Unclassified);

    py::class_<SolutionCandidate>(m, "SolutionCandidate")
        .def_property_readonly("u", [](const SolutionCandidate& s) { return s.u.values(); })
        .def_readonly("residual_sup", &SolutionCandidate::residual_sup)
        .def_readonly("energy", &SolutionCandidate::energy)
        .def_readonly("hessian_min_eig", &SolutionCandidate::hessian_min_eig)
        .def_readonly("hessian_scale", &SolutionCandidate::hessian_scale)
        .def_readonly("classification", &SolutionCandidate::classification);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("residual_tol", &SolverConfig::residual_tol)
        .def_readwrite("max_newton_iters", &SolverConfig::max_newton_iters)
        .def_readwrite("max_monotone_iters", &SolverConfig::max_monotone_iters)
        .def_readwrite("monotone_newton_every", &SolverConfig::monotone_newton_every)
        .def_readwrite("continuation_initial_step", &SolverConfig::continuation_initial_step)
        .def_readwrite("continuation_min_step", &SolverConfig::continuation_min_step)
        .def_readwrite("path_points", &SolverConfig::path_points)
        .def_readwrite("mp_deform_tol", &SolverConfig::mp_deform_tol)
        .def_readwrite("mp_max_deforms", &SolverConfig::mp_max_deforms)
        .def_readwrite("rng_seed", &SolverConfig::rng_seed);

    py::class_<LambdaStarBracket>(m, "LambdaStarBracket")
        .def_readonly("lambda_lo", &LambdaStarBracket::lambda_lo)
        .def_readonly("lambda_hi", &LambdaStarBracket::lambda_hi)
        .def_readonly("evidence_lo", &LambdaStarBracket::evidence_lo)
        .def_property_readonly("evidence_hi", [](const LambdaStarBracket& b) { return std::string(to_string(b.evidence_hi)); })
        .def_readonly("trials", &LambdaStarBracket::trials);

    py::class_<MountainPassReport>(m, "MountainPassReport")
        .def_readonly("second_solution", &MountainPassReport::second_solution)
        .def_readonly("path_max_energy", &MountainPassReport::path_max_energy)
        .def_property_readonly("endpoint", [](const MountainPassReport& r) { return r.endpoint.values(); })
        .def_readonly("deform_steps", &MountainPassReport::deform_steps);

    m.def("laplacian", [](const WeightedGraph& g, const Eigen::VectorXd& f) { return laplacian(g, vf(f)).values(); });
    m.def("residual", [](const KWProblem& p, const Eigen::VectorXd& u) { return residual(p, vf(u)).values(); });
    m.def("energy", [](const KWProblem& p, const Eigen::VectorXd& u) { return energy(p, vf(u)); });
    m.def("hessian_min_eigenvalue", [](const KWProblem& p, const Eigen::VectorXd& u) { return hessian_min_eigenvalue(p, vf(u)); });
    m.def("infeasibility_certificate", &infeasibility_certificate);

    const SolverConfig defaults;
    m.def("solve_convex", [](const KWProblem& p, const SolverConfig& cfg) { return solve_convex(p, cfg); },
          py::arg("problem"), py::arg("config") = defaults);
    m.def("continuation_solve", [](const KWProblem& p, double lambda, const SolverConfig& cfg) { return continuation_solve(p, lambda, cfg); },
          py::arg("problem"), py::arg("lambda_"), py::arg("config") = defaults);
    m.def("minimal_solution", &minimal_solution, py::arg("problem"), py::arg("lambda_"), py::arg("config") = defaults);
    m.def("estimate_lambda_star", &estimate_lambda_star, py::arg("problem"), py::arg("width_tol"),
          py::arg("config") = defaults);
    m.def("mountain_pass_solve", &mountain_pass_solve, py::arg("problem"), py::arg("u_min"), py::arg("config") = defaults);
    m.def(
        "sweep",
        [](const KWProblem& p, const std::vector<double>& grid, bool both, const SolverConfig& cfg) {
            std::vector<py::dict> rows;
            for (const auto& r : sweep(p, grid, both, cfg)) {
                py::dict d;
                d["lambda"] = r.lambda;
                d["branch"] = r.branch;
                d["status"] = r.status;
                d["solution"] = r.solution ? py::cast(*r.solution) : py::none();
                rows.push_back(d);
            }
            return rows;
        },
        py::arg("problem"), py::arg("grid"), py::arg("both") = false, py::arg("config") = defaults);

    m.def("parse_problem", [](const std::string& text) { return parse_problem(std::string_view(text)).problem; });
    m.def("emit_problem", &emit_problem);
    m.def(
        "brute_force_solve_2v",
        [](const KWProblem& p, double R, double step) {
            std::vector<Eigen::VectorXd> out;
            for (const auto& s : oracle::brute_force_solve_2v(p, R, step).solutions) out.push_back(s.values());
            return out;
        },
        py::arg("problem"), py::arg("R") = oracle::kDefaultScanRadius, py::arg("step") = 0.05);
}

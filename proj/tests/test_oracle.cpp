#include <doctest.h>

#include <cmath>

#include "kwgraph/errors.hpp"
#include "kwgraph/oracle.hpp"
#include "support.hpp"

using namespace kwg;
using kwg::testing::random_function;
using kwg::testing::random_graph;
using kwg::testing::random_strict_problem;
using kwg::testing::sample_problem;

TEST_SUITE("oracle") {

TEST_CASE("brute force: constant problem and regimes of the sample") {
    const auto g = kwg::testing::two_vertex();
    const KWProblem flat(g, VertexFunction::constant(g, -1.0), VertexFunction::constant(g, -1.0), 0.0, Mode::Relaxed);
    const auto one = oracle::brute_force_solve_2v(flat, 1.0, 0.05);
    REQUIRE(one.solutions.size() == 1);
    CHECK(one.solutions[0].values().cwiseAbs().maxCoeff() <= 1e-11);

    const auto p = sample_problem();
    CHECK(oracle::brute_force_solve_2v(p).solutions.size() == 1);
    CHECK(oracle::brute_force_solve_2v(p.with_lambda(0.003)).solutions.size() == 2);
    CHECK(oracle::brute_force_solve_2v(p.with_lambda(0.0075)).solutions.empty());
    CHECK(oracle::brute_force_solve_2v(p.with_lambda(1.0)).solutions.empty());
}

TEST_CASE("brute force: invariants and refinement stability") {
    const auto p = sample_problem(0.005);
    const auto coarse = oracle::brute_force_solve_2v(p, 10.0, 0.05);
    const auto fine = oracle::brute_force_solve_2v(p, 10.0, 0.0125);
    CHECK(coarse.scan_radius == 10.0);
    CHECK(coarse.polish_tol == oracle::kDefaultPolishTol);
    REQUIRE(coarse.solutions.size() == fine.solutions.size());
    for (std::size_t i = 0; i < coarse.solutions.size(); ++i) {
        CHECK((coarse.solutions[i].values() - fine.solutions[i].values()).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(oracle::literal_residual(p, coarse.solutions[i]).values().cwiseAbs().maxCoeff() <= coarse.polish_tol);
    }
    for (std::size_t i = 1; i < coarse.solutions.size(); ++i) {
        CHECK((coarse.solutions[i].values() - coarse.solutions[0].values()).cwiseAbs().maxCoeff() > 10.0 * coarse.polish_tol);
    }
    const auto three = WeightedGraph::build({{"a", 1}, {"b", 1}, {"c", 1}}, {{"a", "b", 1}, {"b", "c", 1}});
    const KWProblem q(three, VertexFunction::constant(three, -1.0), VertexFunction(Eigen::Vector3d(0, -1, -1)), 0.0);
    CHECK_THROWS_AS(oracle::brute_force_solve_2v(q), KwError);
}

TEST_CASE("finite difference gradient") {
    const auto g = kwg::testing::two_vertex(1.0, 2.0, 1.5);
    const KWProblem flat(g, VertexFunction::constant(g, -2.0), VertexFunction::constant(g, -1.0), 0.0, Mode::Relaxed);
    const double c = 0.2;
    const auto fd = oracle::finite_difference_gradient(flat, VertexFunction::constant(g, c), 1e-4);
    for (std::size_t x = 0; x < 2; ++x) CHECK(fd[x] == doctest::Approx(2.0 * (-2.0 + std::exp(2.0 * c))).epsilon(1e-7));
    const auto at_solution = oracle::finite_difference_gradient(flat, VertexFunction::constant(g, 0.5 * std::log(2.0)), 1e-4);
    CHECK(at_solution.values().cwiseAbs().maxCoeff() <= 1e-5);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_graph(rng, 2, 8);
        const auto p = random_strict_problem(rng, h, 0.3);
        const auto u = random_function(rng, h);
        const auto exact = energy_gradient(p, u).values();
        double prev = 0.0;
        for (double t : {1e-3, 5e-4, 2.5e-4}) {
            const double err = (oracle::finite_difference_gradient(p, u, t).values() - exact).cwiseAbs().maxCoeff();
            CHECK(err <= 1e-5 * (1.0 + exact.cwiseAbs().maxCoeff()));
            if (prev > 1e-9) CHECK(err / prev == doctest::Approx(0.25).epsilon(0.2));
            prev = err;
        }
    }
}

TEST_CASE("maximum principle trials") {
    const auto g = kwg::testing::two_vertex();
    oracle::MaxPrincipleStats stats;
    CHECK(oracle::max_principle_trial(g, 1.0, 50, 1, &stats));
    CHECK(stats.trials == 50);
    CHECK(stats.failures == 0);
    CHECK_THROWS_AS(oracle::max_principle_trial(g, 0.0, 1, 1), KwError);

    std::mt19937_64 rng(32);
    for (int k = 0; k < 20; ++k) {
        const auto h = random_graph(rng);
        CHECK(oracle::max_principle_trial(h, std::uniform_real_distribution<double>(0.01, 5.0)(rng), 10, k));
    }
}

}  // TEST_SUITE

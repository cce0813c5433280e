#include <doctest.h>

#include <cmath>

#include "kwgraph/errors.hpp"
#include "kwgraph/graph.hpp"
#include "kwgraph/oracle.hpp"
#include "support.hpp"

using namespace kwg;
using kwg::testing::random_function;
using kwg::testing::random_graph;

namespace {

ErrorCode build_error(const std::vector<VertexSpec>& v, const std::vector<EdgeSpec>& e, std::string* msg = nullptr) {
    try {
        WeightedGraph::build(v, e);
    } catch (const KwError& err) {
        if (msg) *msg = err.what();
        return err.code();
    }
    FAIL("build succeeded");
    return ErrorCode::ValidationError;
}

}  // namespace

TEST_SUITE("graph_core") {

TEST_CASE("build: minimal connected graph") {
    const auto g = WeightedGraph::build({{"a", 1}, {"b", 1}}, {{"a", "b", 1}});
    CHECK(g.size() == 2);
    CHECK(g.total_measure() == 2.0);
    CHECK(*g.weight("a", "b") == 1.0);
    CHECK(*g.weight("b", "a") == 1.0);
    CHECK_FALSE(g.weight("a", "a"));
}

TEST_CASE("build: invariant violations name the offender") {
    std::string msg;
    CHECK(build_error({{"a", 1}, {"b", 1}, {"c", 1}}, {{"a", "b", 1}}, &msg) == ErrorCode::Disconnected);
    CHECK(msg.find("'c'") != std::string::npos);
    CHECK(build_error({{"a", 1}, {"b", -2}}, {{"a", "b", 1}}, &msg) == ErrorCode::NonPositiveMeasure);
    CHECK(msg.find("'b'") != std::string::npos);
    CHECK(build_error({{"a", 1}, {"b", 1}}, {{"a", "b", 0}}) == ErrorCode::NonPositiveWeight);
    CHECK(build_error({{"a", 1}, {"b", 1}}, {{"a", "b", 1}, {"b", "a", 2}}) == ErrorCode::DuplicateEdge);
    CHECK(build_error({{"a", 1}, {"b", 1}}, {{"a", "b", 1}, {"a", "a", 1}}) == ErrorCode::SelfLoop);
    CHECK(build_error({{"a", 1}}, {}) == ErrorCode::SingleVertex);
    CHECK(build_error({}, {}) == ErrorCode::EmptyInput);
    CHECK(build_error({{"a", 1}, {"a", 1}}, {}) == ErrorCode::DuplicateVertex);
    CHECK(build_error({{"a", 1}, {"b", 1}}, {{"a", "z", 1}}) == ErrorCode::UnknownVertex);
}

TEST_CASE("build: a repeated edge with the same weight is harmless") {
    const auto g = WeightedGraph::build({{"a", 1}, {"b", 1}}, {{"a", "b", 2}, {"b", "a", 2}});
    CHECK(g.edges().size() == 1);
    CHECK(g.degree(0) == 2.0);
}

TEST_CASE("laplacian: hand values") {
    const auto g = kwg::testing::two_vertex();
    const auto d = laplacian(g, VertexFunction(Eigen::Vector2d(1, 0)));
    CHECK(d[0] == 1.0);
    CHECK(d[1] == -1.0);

    // 3-path a-b-c, omega_ab = 2, omega_bc = 1, mu = (1,2,1), f = (0,1,3)
    const auto p = WeightedGraph::build({{"a", 1}, {"b", 2}, {"c", 1}}, {{"a", "b", 2}, {"b", "c", 1}});
    const VertexFunction f(Eigen::Vector3d(0, 1, 3));
    const auto lap = laplacian(p, f);
    const auto lit = oracle::literal_laplacian(p, f);
    // a: 2(0-1) = -2; b: (2(1-0) + (1-3))/2 = 0; c: (3-1) = 2
    CHECK(lap[0] == doctest::Approx(-2.0));
    CHECK(lap[1] == doctest::Approx(0.0));
    CHECK(lap[2] == doctest::Approx(2.0));
    for (std::size_t x = 0; x < 3; ++x) CHECK(lap[x] == doctest::Approx(lit[x]).epsilon(1e-15));
}

TEST_CASE("laplacian: domain mismatch") {
    const auto g = kwg::testing::two_vertex();
    CHECK_THROWS_AS(laplacian(g, VertexFunction(Eigen::Vector3d(1, 2, 3))), KwError);
}

TEST_CASE("gradient form: hand values and product rule") {
    const auto g = kwg::testing::two_vertex();
    const VertexFunction f(Eigen::Vector2d(1, 0));
    const auto gam = gradient_form(g, f, f);
    CHECK(gam[0] == 0.5);
    CHECK(gam[1] == 0.5);
    const auto zero = gradient_form(g, VertexFunction::constant(g, 3.0), f);
    CHECK(zero.values().cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h6 = random_graph(rng, 6, 6);
        const auto a = random_function(rng, h6);
        const auto b = random_function(rng, h6);
        VertexFunction ab((a.values().array() * b.values().array()).matrix());
        const auto la = laplacian(h6, a);
        const auto lb = laplacian(h6, b);
        const auto lab = laplacian(h6, ab);
        const auto gab = gradient_form(h6, a, b);
        const auto gba = gradient_form(h6, b, a);
        for (std::size_t x = 0; x < h6.size(); ++x) {
            const double rhs = a[x] * lb[x] + b[x] * la[x] - lab[x];
            CHECK(2.0 * gab[x] == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
            CHECK(gab[x] == gba[x]);
        }
    }
}

TEST_CASE("integrate and norms: hand values") {
    const auto p = WeightedGraph::build({{"a", 1}, {"b", 2}, {"c", 1}}, {{"a", "b", 2}, {"b", "c", 1}});
    CHECK(integrate(p, VertexFunction(Eigen::Vector3d(1, -1, 2))) == 1.0);
    CHECK(integrate(p, VertexFunction::constant(p, 1.0)) == p.total_measure());
    CHECK(integrate(p, VertexFunction::zero(p)) == 0.0);

    const auto g = kwg::testing::two_vertex();
    CHECK(lp_norm(g, VertexFunction(Eigen::Vector2d(3, 4)), 2.0) == doctest::Approx(5.0));
    CHECK(lp_norm(g, VertexFunction::constant(g, -2.5), kInfinity) == 2.5);
    CHECK(lp_norm(g, VertexFunction::zero(g), 3.0) == 0.0);
    CHECK_THROWS_AS(lp_norm(g, VertexFunction::zero(g), 0.5), KwError);

    CHECK(sobolev_norm(g, VertexFunction::zero(g)) == 0.0);
    CHECK(sobolev_norm(p, VertexFunction::constant(p, -3.0)) == doctest::Approx(3.0 * std::sqrt(4.0)));
    CHECK(sobolev_norm(g, VertexFunction(Eigen::Vector2d(1, 0))) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("from_map: exact domain") {
    const auto g = kwg::testing::two_vertex();
    CHECK(VertexFunction::from_map(g, {{"a", 1.0}, {"b", 2.0}})[1] == 2.0);
    CHECK_THROWS_AS(VertexFunction::from_map(g, {{"a", 1.0}}), KwError);
    CHECK_THROWS_AS(VertexFunction::from_map(g, {{"a", 1.0}, {"b", 2.0}, {"c", 3.0}}), KwError);
}

TEST_CASE("properties on random graphs: Green identity, kernel, sign, symmetry") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_graph(rng);
        const auto f = random_function(rng, g);
        const auto h = random_function(rng, g);
        const double lhs = inner(g, f, laplacian(g, h));
        const double rhs = integrate(g, gradient_form(g, f, h));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        CHECK(std::abs(lhs - inner(g, h, laplacian(g, f))) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        CHECK(laplacian(g, VertexFunction::constant(g, 4.2)).values().cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(integrate(g, gradient_form(g, f, f)) >= 0.0);
    }
}

}  // TEST_SUITE

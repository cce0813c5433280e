#pragma once

#include <random>
#include <string>
#include <vector>

#include "kwgraph/model.hpp"

namespace kwg::testing {

inline WeightedGraph path_graph(const std::vector<double>& mu, const std::vector<double>& w) {
    std::vector<VertexSpec> vs;
    std::vector<EdgeSpec> es;
    for (std::size_t i = 0; i < mu.size(); ++i) vs.push_back({"v" + std::to_string(i), mu[i]});
    for (std::size_t i = 0; i < w.size(); ++i) es.push_back({"v" + std::to_string(i), "v" + std::to_string(i + 1), w[i]});
    return WeightedGraph::build(vs, es);
}

inline WeightedGraph two_vertex(double mu_a = 1.0, double mu_b = 1.0, double w = 1.0) {
    return WeightedGraph::build({{"a", mu_a}, {"b", mu_b}}, {{"a", "b", w}});
}

/// Connected: a random spanning tree plus extra random edges.
inline WeightedGraph random_graph(std::mt19937_64& rng, std::size_t min_n = 2, std::size_t max_n = 20) {
    std::uniform_int_distribution<std::size_t> size(min_n, max_n);
    std::uniform_real_distribution<double> pos(0.2, 3.0);
    const auto n = size(rng);
    std::vector<VertexSpec> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back({"x" + std::to_string(i), pos(rng)});
    std::vector<EdgeSpec> es;
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    for (std::size_t i = 1; i < n; ++i) {
        const auto j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        es.push_back({vs[i].id, vs[j].id, pos(rng)});
        used[i][j] = used[j][i] = true;
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const auto extra = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    for (std::size_t k = 0; k < extra; ++k) {
        const auto a = pick(rng);
        const auto b = pick(rng);
        if (a == b || used[a][b]) continue;
        used[a][b] = used[b][a] = true;
        es.push_back({vs[a].id, vs[b].id, pos(rng)});
    }
    return WeightedGraph::build(vs, es);
}

inline VertexFunction random_function(std::mt19937_64& rng, const WeightedGraph& g, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    VertexFunction f = VertexFunction::zero(g);
    for (std::size_t x = 0; x < g.size(); ++x) f[x] = d(rng);
    return f;
}

/// Strict problem: max K = 0 at a random vertex, K non-constant, int kappa < 0.
inline KWProblem random_strict_problem(std::mt19937_64& rng, const WeightedGraph& g, double lambda = 0.0) {
    std::uniform_real_distribution<double> k(-2.0, -0.3);
    std::uniform_real_distribution<double> kap(-2.0, 0.5);
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    VertexFunction K = VertexFunction::zero(g);
    for (std::size_t x = 0; x < g.size(); ++x) K[x] = k(rng);
    K[pick(rng)] = 0.0;
    VertexFunction kappa = VertexFunction::zero(g);
    for (std::size_t x = 0; x < g.size(); ++x) kappa[x] = kap(rng);
    const double total = integrate(g, kappa);
    if (total >= -0.1) kappa.values().array() -= (total + 0.5) / g.total_measure();
    return KWProblem(g, kappa, K, lambda);
}

/// Two vertices, K = (0, -k), moderate coefficients so all solutions stay well inside |u| <= 10.
inline KWProblem random_two_vertex_problem(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(0.5, 2.0);
    std::uniform_real_distribution<double> kap(-2.0, -0.2);
    const auto g = two_vertex(pos(rng), pos(rng), pos(rng));
    VertexFunction K = VertexFunction::zero(g);
    K[1] = -pos(rng);
    VertexFunction kappa = VertexFunction::zero(g);
    kappa[0] = kap(rng);
    kappa[1] = kap(rng);
    return KWProblem(g, kappa, K, 0.0);
}

/// The shipped docs sample: a, b with mu = 1, omega = 1, kappa = (-1, -2), K = (0, -1).
inline KWProblem sample_problem(double lambda = 0.0) {
    const auto g = two_vertex();
    VertexFunction kappa(Eigen::Vector2d(-1.0, -2.0));
    VertexFunction K(Eigen::Vector2d(0.0, -1.0));
    return KWProblem(g, kappa, K, lambda);
}

}  // namespace kwg::testing

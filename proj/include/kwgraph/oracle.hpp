#pragma once

#include <cstdint>
#include <vector>

#include "kwgraph/model.hpp"

// Independent ground truth for small instances. Nothing here calls the residual,
// energy or operator code of the library; the formulas are transcribed again from
// the raw graph data (edge list, measures) so a shared bug cannot confirm itself.
namespace kwg::oracle {

struct OracleSolutionSet {
    std::vector<VertexFunction> solutions;
    double scan_radius = 0.0;
    double grid_step = 0.0;
    double polish_tol = 0.0;
};

inline constexpr double kDefaultScanRadius = 10.0;
inline constexpr double kDefaultPolishTol = 1e-11;

/// Edge-list evaluation of (1/mu(x)) sum_y omega_xy (f(x) - f(y)).
VertexFunction literal_laplacian(const WeightedGraph& g, const VertexFunction& f);

/// Delta u + kappa - (K + lambda) e^{2u}, evaluated vertex by vertex from the edge list.
VertexFunction literal_residual(const KWProblem& p, const VertexFunction& u);

/// Sum over edges of omega (u_a - u_b)^2 plus sum over vertices of mu (2 kappa u - K_lambda e^{2u}).
double literal_energy(const KWProblem& p, const VertexFunction& u);

/// Every solution of a 2-vertex problem in [-R, R]^2: grid scan for cells where both residual
/// components change sign, 2D Newton polish from each, deduplication.
OracleSolutionSet brute_force_solve_2v(const KWProblem& p, double R = kDefaultScanRadius, double step = 0.05,
                                       double polish_tol = kDefaultPolishTol);

/// Central differences of the energy along vertex indicators, divided by mu(x), so that
/// int g phi dmu approximates the directional derivative.
VertexFunction finite_difference_gradient(const KWProblem& p, const VertexFunction& u, double t);

struct MaxPrincipleStats {
    int trials = 0;
    int failures = 0;
    double min_value = 0.0;  ///< smallest solution value seen over all trials
};

/// Solves (Delta + c) u = g for random g >= 0 and checks u >= -1e-12 (weak principle) and,
/// when g is not identically 0, that u does not vanish anywhere (strong principle).
/// The solve is sign-exact elimination, so "vanish" means an exact zero: far from the
/// support of g a correct u can be positive yet far below 1e-12.
bool max_principle_trial(const WeightedGraph& g, double c, int trials, std::uint64_t seed,
                         MaxPrincipleStats* stats = nullptr);

}  // namespace kwg::oracle

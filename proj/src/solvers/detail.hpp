#pragma once

#include <cmath>

#include "kwgraph/errors.hpp"
#include "kwgraph/solvers.hpp"

namespace kwg::detail {

/// mu-weighted Jacobian of the residual, M (Delta - 2 diag(K_lambda e^{2u})) = S - 2 diag(mu K_lambda e^{2u}).
/// Symmetric; Newton steps solve  jacobian * d = -M r.
inline Eigen::MatrixXd weighted_jacobian(const KWProblem& p, const VertexFunction& u) {
    const auto& g = p.graph();
    Eigen::MatrixXd a = g.stiffness();
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto i = static_cast<Eigen::Index>(x);
        a(i, i) -= 2.0 * g.measure(x) * (p.K()[x] + p.lambda()) * std::exp(2.0 * u[x]);
    }
    return a;
}

inline double sup_norm(const VertexFunction& f) { return f.values().cwiseAbs().maxCoeff(); }

inline double sup_norm(const Eigen::VectorXd& f) { return f.cwiseAbs().maxCoeff(); }

/// Residual, or nothing when e^{2u} would overflow.
inline std::optional<VertexFunction> try_residual(const KWProblem& p, const VertexFunction& u) {
    try {
        return residual(p, u);
    } catch (const KwError& e) {
        if (e.code() == ErrorCode::Overflow) return std::nullopt;
        throw;
    }
}

inline double default_initial_step(const KWProblem& p, const SolverConfig& cfg) {
    if (cfg.continuation_initial_step > 0.0) return cfg.continuation_initial_step;
    return 0.1 * std::max(-p.min_K(), 1e-3);
}

}  // namespace kwg::detail

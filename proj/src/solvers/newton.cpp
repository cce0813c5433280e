#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "detail.hpp"

namespace kwg {

void SolverConfig::validate() const {
    auto fail = [](const std::string& what) { throw KwError(ErrorCode::InvalidConfig, what); };
    if (!(residual_tol > 0.0)) fail("residual_tol must be positive");
    if (max_newton_iters <= 0) fail("max_newton_iters must be positive");
    if (max_monotone_iters <= 0) fail("max_monotone_iters must be positive");
    if (monotone_newton_every < 0) fail("monotone_newton_every must be non-negative");
    if (!(line_search_shrink > 0.0 && line_search_shrink < 1.0)) fail("line_search_shrink must lie in (0,1)");
    if (!(continuation_min_step > 0.0)) fail("continuation_min_step must be positive");
    if (!(mp_deform_tol > 0.0)) fail("mp_deform_tol must be positive");
    if (mp_max_deforms <= 0) fail("mp_max_deforms must be positive");
    if (path_points < 3) fail("path_points must be at least 3");
}

VertexFunction solve_poisson(const WeightedGraph& g, const VertexFunction& rhs) {
    require_domain(g, rhs, "rhs");
    const double total = integrate(g, rhs);
    if (std::abs(total) > 1e-10 * g.total_measure()) {
        std::ostringstream os;
        os << "integral of rhs is " << total << ", expected 0";
        throw KwError(ErrorCode::IncompatibleRHS, os.str());
    }
    // Remove the (rounding-level) mean so the system is exactly compatible.
    const Eigen::VectorXd f = rhs.values().array() - total / g.total_measure();
    const Eigen::VectorXd& mu = g.measures();

    // S v = M f has the constants as kernel; S + mu mu^T is positive definite and its
    // solution automatically satisfies mu^T v = 0 because 1^T M f = 0.
    Eigen::MatrixXd a = g.stiffness() + mu * mu.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw KwError(ErrorCode::SingularSolveFailure, "Cholesky factorization failed");
    Eigen::VectorXd v = llt.solve(mu.cwiseProduct(f));
    v.array() -= mu.dot(v) / g.total_measure();

    VertexFunction out(std::move(v));
    const auto lap = laplacian(g, out);
    const double err = detail::sup_norm(lap.values() - f);
    if (!(err <= 1e-10)) {
        std::ostringstream os;
        os << "Poisson residual " << err << " above 1e-10";
        throw KwError(ErrorCode::SingularSolveFailure, os.str());
    }
    return out;
}

SolutionCandidate solve_convex(const KWProblem& p, const SolverConfig& cfg, const std::optional<VertexFunction>& start,
                               ConvexSolveTrace* trace) {
    cfg.validate();
    const auto& g = p.graph();
    const auto klam = k_lambda(p);
    if (klam.values().maxCoeff() > 0.0) {
        std::ostringstream os;
        os << "K_lambda is positive somewhere (max " << klam.values().maxCoeff() << ")";
        throw KwError(ErrorCode::PreconditionViolated, os.str());
    }
    if (klam.values().minCoeff() == 0.0 && klam.values().maxCoeff() == 0.0) {
        throw KwError(ErrorCode::PreconditionViolated, "K_lambda vanishes identically");
    }

    VertexFunction u = start.value_or(VertexFunction::zero(g));
    require_domain(g, u, "start");
    if (trace) *trace = {};

    constexpr double armijo = 1e-4;
    for (int it = 0;; ++it) {
        const auto r = residual(p, u);
        if (detail::sup_norm(r) <= cfg.residual_tol) break;
        if (it >= cfg.max_newton_iters) {
            std::ostringstream os;
            os << "no convergence in " << cfg.max_newton_iters << " Newton steps (residual " << detail::sup_norm(r) << ")";
            throw KwError(ErrorCode::ConvergenceFailure, os.str());
        }

        Eigen::LLT<Eigen::MatrixXd> llt(detail::weighted_jacobian(p, u));
        if (llt.info() != Eigen::Success) throw KwError(ErrorCode::ConvergenceFailure, "Hessian lost definiteness");
        const Eigen::VectorXd mr = g.measures().cwiseProduct(r.values());
        const VertexFunction dir(llt.solve(-mr));
        // dE(u)(d) = int 2 r d dmu < 0 for the Newton direction
        const double slope = 2.0 * mr.dot(dir.values());

        double t = 1.0;
        bool accepted = false;
        while (t > 1e-14) {
            const VertexFunction step(t * dir.values());
            double change = 0.0;
            bool finite = true;
            try {
                change = energy_difference(p, u, step);
            } catch (const KwError& e) {
                if (e.code() != ErrorCode::Overflow) throw;
                finite = false;
            }
            if (finite && change < 0.0 && change <= armijo * t * slope) {
                u.values() += step.values();
                if (trace) trace->energy_changes.push_back(change);
                accepted = true;
                break;
            }
            t *= cfg.line_search_shrink;
        }
        if (trace) trace->iterations = it + 1;
        if (!accepted) {
            std::ostringstream os;
            os << "line search failed at residual " << detail::sup_norm(r);
            throw KwError(ErrorCode::ConvergenceFailure, os.str());
        }
    }
    return make_candidate(p, u);
}

std::optional<VertexFunction> newton_polish(const KWProblem& p, const VertexFunction& start, const SolverConfig& cfg) {
    const auto& g = p.graph();
    require_domain(g, start, "start");
    auto merit = [&](const VertexFunction& r) { return 0.5 * inner(g, r, r); };

    VertexFunction u = start;
    auto r = detail::try_residual(p, u);
    if (!r) return std::nullopt;
    constexpr double armijo = 1e-4;
    for (int it = 0; it <= cfg.max_newton_iters; ++it) {
        if (detail::sup_norm(*r) <= cfg.residual_tol) return u;
        if (it == cfg.max_newton_iters) break;

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(detail::weighted_jacobian(p, u));
        const Eigen::VectorXd mr = g.measures().cwiseProduct(r->values());
        Eigen::VectorXd dir = lu.solve(-mr);
        if (!dir.allFinite() || lu.rcond() < 1e-14) return std::nullopt;

        const double m0 = merit(*r);
        double t = 1.0;
        bool accepted = false;
        while (t > 1e-12) {
            VertexFunction trial(u.values() + t * dir);
            auto rt = detail::try_residual(p, trial);
            if (rt && merit(*rt) <= (1.0 - 2.0 * armijo * t) * m0) {
                u = std::move(trial);
                r = std::move(rt);
                accepted = true;
                break;
            }
            t *= cfg.line_search_shrink;
        }
        if (!accepted) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace kwg

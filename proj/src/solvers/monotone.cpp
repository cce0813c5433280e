#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "detail.hpp"

namespace kwg {

double choose_monotonicity_constant(const KWProblem& p, double A) {
    if (2.0 * A > kMaxExponent) {
        std::ostringstream os;
        os << "bound A = " << A << " overflows e^{2A}";
        throw KwError(ErrorCode::Overflow, os.str());
    }
    const double most_negative = std::max(0.0, -k_lambda(p).values().minCoeff());
    return 2.0 * most_negative * std::exp(2.0 * A) + 1.0;
}

double choose_monotonicity_constant(const KWProblem& p, const VertexFunction& ceiling) {
    const auto& g = p.graph();
    require_domain(g, ceiling, "ceiling");
    const auto klam = k_lambda(p);
    double c = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (klam[x] >= 0.0) continue;
        if (2.0 * ceiling[x] > kMaxExponent) {
            std::ostringstream os;
            os << "ceiling " << ceiling[x] << " at vertex '" << g.id(x) << "' overflows e^{2t}";
            throw KwError(ErrorCode::Overflow, os.str());
        }
        c = std::max(c, -2.0 * klam[x] * std::exp(2.0 * ceiling[x]));
    }
    // any c > 0 keeps Delta + c invertible; the margin only guards rounding
    return c * (1.0 + 1e-6) + 1e-3;
}

namespace {

constexpr double kMaxShift = 1e6;

VertexFunction lower_solution(const KWProblem& p, const VertexFunction* ceiling) {
    const auto& g = p.graph();
    const double kappa_int = integrate(g, p.kappa());
    if (!(kappa_int < 0.0)) throw KwError(ErrorCode::PreconditionViolated, "lower solution needs int kappa dmu < 0");
    if (ceiling) require_domain(g, *ceiling, "ceiling");

    const double mean = kappa_int / g.total_measure();
    VertexFunction rhs(((-p.kappa().values()).array() + mean).matrix());
    const auto v = solve_poisson(g, rhs);
    const double margin = std::min(1.0, std::abs(kappa_int) / (2.0 * g.total_measure()));

    for (double s = 1.0; s <= kMaxShift; s *= 2.0) {
        VertexFunction phi((v.values().array() - s).matrix());
        if (ceiling && (phi.values().array() > ceiling->values().array()).any()) continue;
        const auto r = detail::try_residual(p, phi);
        if (r && r->values().maxCoeff() < -margin) return phi;
    }
    std::ostringstream os;
    os << "no lower solution v - s with s <= " << kMaxShift;
    throw KwError(ErrorCode::SearchFailure, os.str());
}

bool exceeds(double a, double b) { return a > b + kOrderSlack * (1.0 + std::abs(b)); }

}  // namespace

VertexFunction build_lower_solution(const KWProblem& p) { return lower_solution(p, nullptr); }

VertexFunction build_lower_solution_below(const KWProblem& p, const VertexFunction& ceiling) {
    return lower_solution(p, &ceiling);
}

MonotoneResult monotone_solve(const KWProblem& p, const OrderInterval& interval, const SolverConfig& cfg,
                              const MonotoneObserver& observer) {
    cfg.validate();
    const auto& g = p.graph();
    const auto& phi = interval.lower;
    const auto& psi = interval.upper;
    require_domain(g, phi, "lower");
    require_domain(g, psi, "upper");
    const auto n = g.size();
    for (std::size_t x = 0; x < n; ++x) {
        if (phi[x] > psi[x]) {
            std::ostringstream os;
            os << "lower exceeds upper at vertex '" << g.id(x) << "' (" << phi[x] << " > " << psi[x] << ")";
            throw KwError(ErrorCode::NotAnOrderedPair, os.str());
        }
    }
    const auto r_lower = residual(p, phi);
    const auto r_upper = residual(p, psi);
    if (r_lower.values().maxCoeff() > cfg.residual_tol) {
        throw KwError(ErrorCode::NotALowerSolution, "residual of the lower function is positive somewhere");
    }
    if (r_upper.values().minCoeff() < -cfg.residual_tol) {
        throw KwError(ErrorCode::NotAnUpperSolution, "residual of the upper function is negative somewhere");
    }

    // t -> ct - f(t) only has to be nondecreasing below psi(x) at each vertex.
    const double c = choose_monotonicity_constant(p, psi);
    const Eigen::VectorXd& mu = g.measures();
    Eigen::MatrixXd op = g.stiffness();
    op.diagonal() += c * mu;
    Eigen::LLT<Eigen::MatrixXd> llt(op);
    if (llt.info() != Eigen::Success) throw KwError(ErrorCode::SingularSolveFailure, "Delta + c is not positive definite");

    const auto klam = k_lambda(p);
    auto step = [&](const VertexFunction& cur) {
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
        for (std::size_t x = 0; x < n; ++x) {
            const auto i = static_cast<Eigen::Index>(x);
            rhs[i] = mu[i] * (c * cur[x] - p.kappa()[x] + klam[x] * std::exp(2.0 * cur[x]));
        }
        return VertexFunction(llt.solve(rhs));
    };
    auto violation = [&](int j, const std::string& what, std::size_t x) {
        std::ostringstream os;
        os << "iteration " << j << ": " << what << " at vertex '" << g.id(x) << "'";
        throw KwError(ErrorCode::MonotonicityViolation, os.str());
    };

    VertexFunction lower = phi;
    VertexFunction upper = psi;
    bool lower_done = detail::sup_norm(r_lower) <= cfg.residual_tol;
    bool upper_done = detail::sup_norm(r_upper) <= cfg.residual_tol;
    int j = 0;
    while (!(lower_done && upper_done)) {
        if (j >= cfg.max_monotone_iters) {
            std::ostringstream os;
            os << "monotone iteration did not converge in " << cfg.max_monotone_iters << " steps";
            throw KwError(ErrorCode::ConvergenceFailure, os.str());
        }
        ++j;
        if (!lower_done) {
            auto next = step(lower);
            for (std::size_t x = 0; x < n; ++x) {
                if (exceeds(lower[x], next[x])) violation(j, "lower sequence decreased", x);
                if (exceeds(next[x], psi[x])) violation(j, "lower sequence left the interval", x);
            }
            const double diff = detail::sup_norm(next.values() - lower.values());
            lower = std::move(next);
            lower_done = diff <= cfg.residual_tol && detail::sup_norm(residual(p, lower)) <= cfg.residual_tol;
        }
        if (!upper_done) {
            auto next = step(upper);
            for (std::size_t x = 0; x < n; ++x) {
                if (exceeds(next[x], upper[x])) violation(j, "upper sequence increased", x);
                if (exceeds(phi[x], next[x])) violation(j, "upper sequence left the interval", x);
            }
            const double diff = detail::sup_norm(next.values() - upper.values());
            upper = std::move(next);
            upper_done = diff <= cfg.residual_tol && detail::sup_norm(residual(p, upper)) <= cfg.residual_tol;
        }
        for (std::size_t x = 0; x < n; ++x) {
            if (exceeds(lower[x], upper[x])) violation(j, "lower sequence crossed the upper sequence", x);
        }
        if (observer) observer(j, lower, upper);
        if (cfg.monotone_newton_every > 0 && j % cfg.monotone_newton_every == 0 && !(lower_done && upper_done)) {
            // Newton from both iterates; kept only if it lands inside the current bracket.
            auto inside = [&](const std::optional<VertexFunction>& u) {
                if (!u) return false;
                for (std::size_t x = 0; x < n; ++x) {
                    if (exceeds(lower[x], (*u)[x]) || exceeds((*u)[x], upper[x])) return false;
                }
                return true;
            };
            auto lo = newton_polish(p, lower, cfg);
            auto hi = newton_polish(p, upper, cfg);
            if (inside(lo) && inside(hi)) {
                // two Newton runs into the same root differ by rounding, not by order
                bool crossed = false;
                for (std::size_t x = 0; x < n; ++x) crossed = crossed || exceeds((*lo)[x], (*hi)[x]);
                const double gap = detail::sup_norm(lo->values() - hi->values());
                if (!crossed || gap <= 1e-8 * (1.0 + detail::sup_norm(*lo))) {
                    lower = std::move(*lo);
                    upper = crossed ? lower : std::move(*hi);
                    lower_done = upper_done = true;
                }
            }
        }
    }

    MonotoneResult out;
    out.iterations = j;
    out.limits_differ = detail::sup_norm(upper.values() - lower.values()) > cfg.residual_tol;
    out.upper_limit = std::move(upper);
    out.solution = make_candidate(p, lower);
    return out;
}

}  // namespace kwg

#include <cmath>
#include <sstream>

#include "detail.hpp"

namespace kwg {

std::string_view to_string(UpperEvidence e) {
    switch (e) {
        case UpperEvidence::CertifiedInfeasible: return "certified_infeasible";
        case UpperEvidence::BudgetFailed: return "budget_failed";
    }
    return "budget_failed";
}

namespace {

/// Newton from `start` at lambda; kept only if the result is a strict local minimum.
std::optional<VertexFunction> stable_newton(const KWProblem& p, double lambda, const VertexFunction& start,
                                            const SolverConfig& cfg) {
    const auto at = p.with_lambda(lambda);
    auto u = newton_polish(at, start, cfg);
    if (!u) return std::nullopt;
    const auto spectrum = hessian_spectrum(at, *u);
    if (classify(spectrum[0], spectrum.cwiseAbs().maxCoeff()) != Classification::LocalMin) return std::nullopt;
    return u;
}

}  // namespace

SolutionCandidate continuation_solve(const KWProblem& p, double target_lambda, const SolverConfig& cfg,
                                     ContinuationTrace* trace) {
    cfg.validate();
    const auto target = p.with_lambda(target_lambda);
    if (infeasibility_certificate(target)) {
        std::ostringstream os;
        os << "K_lambda >= 0 at lambda = " << target_lambda << " while int kappa dmu < 0";
        throw KwError(ErrorCode::CertifiedInfeasible, os.str());
    }
    if (trace) *trace = {};

    // K_lambda <= 0 up to lambda = -max K (0 for normalized K): the convex regime.
    const double convex_edge = -p.max_K();
    if (target_lambda <= convex_edge) {
        auto sol = solve_convex(target, cfg);
        if (trace) {
            trace->accepted.push_back({target_lambda, sol.energy, sol.hessian_min_eig});
            trace->upper_lambda = target_lambda;
        }
        return sol;
    }

    const auto start = solve_convex(p.with_lambda(convex_edge), cfg);
    if (trace) trace->accepted.push_back({convex_edge, start.energy, start.hessian_min_eig});
    VertexFunction u = start.u;
    double lambda = convex_edge;
    double h = detail::default_initial_step(p, cfg);

    while (lambda < target_lambda) {
        const double trial = std::min(lambda + h, target_lambda);
        if (auto next = stable_newton(p, trial, u, cfg)) {
            u = std::move(*next);
            lambda = trial;
            h *= 1.5;
            if (trace) {
                const auto at = p.with_lambda(lambda);
                trace->accepted.push_back({lambda, energy(at, u), hessian_min_eigenvalue(at, u)});
            }
            continue;
        }
        h *= 0.5;
        if (h < cfg.continuation_min_step) {
            std::ostringstream os;
            os << "step below " << cfg.continuation_min_step << " at lambda = " << lambda << " (target "
               << target_lambda << ")";
            throw KwError(ErrorCode::ContinuationStalled, os.str());
        }
    }

    // A solution at lambda_1 > target is a strict upper solution at target:
    // its residual there is (lambda_1 - target) e^{2u} > 0.
    VertexFunction upper = u;
    double upper_lambda = target_lambda;
    for (double eta = h; eta >= cfg.continuation_min_step; eta *= 0.5) {
        const double trial = target_lambda + eta;
        if (infeasibility_certificate(p.with_lambda(trial))) continue;
        if (auto next = stable_newton(p, trial, u, cfg)) {
            upper = std::move(*next);
            upper_lambda = trial;
            break;
        }
    }

    const auto lower = build_lower_solution_below(target, upper);
    auto result = monotone_solve(target, {lower, upper}, cfg);
    if (trace) {
        trace->upper_lambda = upper_lambda;
        trace->monotone_iterations = result.iterations;
    }
    return std::move(result.solution);
}

LambdaStarBracket estimate_lambda_star(const KWProblem& p, double width_tol, const SolverConfig& cfg) {
    cfg.validate();
    if (!p.strict()) throw KwError(ErrorCode::HypothesesViolated, "lambda* is defined for strict problems only");
    if (!(width_tol > 0.0)) throw KwError(ErrorCode::InvalidConfig, "width_tol must be positive");

    LambdaStarBracket b;
    b.lambda_lo = 0.0;
    b.lambda_hi = -p.min_K();
    b.evidence_hi = UpperEvidence::CertifiedInfeasible;
    b.evidence_lo = solve_convex(p.with_lambda(0.0), cfg);

    constexpr int kMaxTrials = 200;
    while ((b.lambda_hi - b.lambda_lo > width_tol || b.lambda_lo <= 0.0) && b.trials < kMaxTrials) {
        const double mid = 0.5 * (b.lambda_lo + b.lambda_hi);
        ++b.trials;
        try {
            b.evidence_lo = continuation_solve(p, mid, cfg);
            b.lambda_lo = mid;
        } catch (const KwError& e) {
            switch (e.code()) {
                case ErrorCode::CertifiedInfeasible:
                    b.lambda_hi = mid;
                    b.evidence_hi = UpperEvidence::CertifiedInfeasible;
                    break;
                case ErrorCode::ContinuationStalled:
                case ErrorCode::ConvergenceFailure:
                case ErrorCode::MonotonicityViolation:
                case ErrorCode::SearchFailure:
                    b.lambda_hi = mid;
                    b.evidence_hi = UpperEvidence::BudgetFailed;
                    break;
                default:
                    throw;
            }
        }
    }
    if (b.lambda_lo <= 0.0) throw KwError(ErrorCode::ConvergenceFailure, "no positive lambda was solved");
    return b;
}

}  // namespace kwg

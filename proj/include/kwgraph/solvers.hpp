#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <optional>
#include <vector>

#include "kwgraph/model.hpp"

namespace kwg {

struct SolverConfig {
    double residual_tol = 1e-10;  ///< l^infinity residual accepted as a solution
    int max_newton_iters = 200;
    int max_monotone_iters = 10000;
    /// Every this many monotone steps, try Newton from both iterates; 0 disables.
    int monotone_newton_every = 25;
    double line_search_shrink = 0.5;
    /// Non-positive means "0.1 * (-min K)" resolved per problem.
    double continuation_initial_step = 0.0;
    double continuation_min_step = 1e-6;
    int path_points = 40;
    double mp_deform_tol = 1e-8;
    int mp_max_deforms = 50000;
    std::uint64_t rng_seed = 0;

    /// Throws InvalidConfig when a tolerance is not positive or path_points < 3.
    void validate() const;
};

/// Slack allowed in the pointwise order checks of the monotone iteration (absolute,
/// scaled by 1 + |value|); covers rounding in the linear solves only.
inline constexpr double kOrderSlack = 1e-12;

/// Solves Delta v = rhs with int v dmu = 0. rhs must have zero mean (within 1e-10 mu(V)).
VertexFunction solve_poisson(const WeightedGraph& g, const VertexFunction& rhs);

struct ConvexSolveTrace {
    int iterations = 0;
    /// E(u_{k+1}) - E(u_k) of each accepted step, computed without cancellation
    std::vector<double> energy_changes;
};

/// Unique minimizer of E in the convex regime K_lambda <= 0, K_lambda != 0.
/// Damped Newton on the gradient, backtracking on the energy.
SolutionCandidate solve_convex(const KWProblem& p, const SolverConfig& cfg,
                               const std::optional<VertexFunction>& start = std::nullopt,
                               ConvexSolveTrace* trace = nullptr);

/// Newton's method on the residual with backtracking on the mu-weighted squared residual.
/// Returns nothing when it fails to reach cfg.residual_tol. Used to follow branches and to polish.
std::optional<VertexFunction> newton_polish(const KWProblem& p, const VertexFunction& start, const SolverConfig& cfg);

/// c = 2 max(0, -min K_lambda) e^{2A} + 1, so that t -> c t - (kappa - K_lambda e^{2t})
/// is nondecreasing on [-A, A] (indeed on (-infinity, A]) at every vertex.
double choose_monotonicity_constant(const KWProblem& p, double A);

/// Vertexwise version used by monotone_solve: t -> ct - f(x,t) is nondecreasing for t <= ceiling(x),
/// which needs c >= 2 max(0, -K_lambda(x)) e^{2 ceiling(x)} at every x.
double choose_monotonicity_constant(const KWProblem& p, const VertexFunction& ceiling);

/// phi = v - s with Delta v = -kappa + mean(kappa) and s doubled from 1 until the
/// residual is below -min(1, |int kappa|/(2 mu(V))) everywhere.
VertexFunction build_lower_solution(const KWProblem& p);

/// As build_lower_solution, but keeps doubling s until phi <= ceiling as well.
VertexFunction build_lower_solution_below(const KWProblem& p, const VertexFunction& ceiling);

struct MonotoneResult {
    SolutionCandidate solution;  ///< limit of the sequence started at the lower solution
    VertexFunction upper_limit;  ///< limit of the sequence started at the upper solution
    bool limits_differ = false;  ///< limits further apart than residual_tol
    int iterations = 0;
};

/// Called after every iteration with the current lower and upper iterates.
using MonotoneObserver = std::function<void(int iteration, const VertexFunction& lower, const VertexFunction& upper)>;

/// Sub/super-solution iteration (Delta + c) phi_{j+1} = c phi_j - f(phi_j) from both ends
/// of the interval, f(t) = kappa - K_lambda e^{2t}. Asserts phi <= phi_j <= phi_{j+1} <= psi
/// (and the mirror for the upper sequence) at every step. With cfg.monotone_newton_every > 0 the
/// iteration is finished early by Newton once both polished limits fall inside the current bracket.
MonotoneResult monotone_solve(const KWProblem& p, const OrderInterval& interval, const SolverConfig& cfg,
                              const MonotoneObserver& observer = {});

struct BranchPoint {
    double lambda;
    double energy;
    double hessian_min_eig;
};

struct ContinuationTrace {
    std::vector<BranchPoint> accepted;
    double upper_lambda = 0.0;  ///< lambda_1 whose solution served as the upper solution
    int monotone_iterations = 0;
};

/// Minimal-branch solution at target_lambda by natural continuation from the convex regime,
/// finished with the monotone iteration between a lower solution and u_{lambda_1}, lambda_1 >= target.
/// Throws CertifiedInfeasible when the certificate fires and ContinuationStalled when the step
/// size falls below cfg.continuation_min_step.
SolutionCandidate continuation_solve(const KWProblem& p, double target_lambda, const SolverConfig& cfg,
                                     ContinuationTrace* trace = nullptr);

enum class UpperEvidence { CertifiedInfeasible, BudgetFailed };

std::string_view to_string(UpperEvidence e);

struct LambdaStarBracket {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    SolutionCandidate evidence_lo;
    UpperEvidence evidence_hi = UpperEvidence::CertifiedInfeasible;
    int trials = 0;
};

/// Bisection on (0, -min K) with continuation_solve as the solvability test.
LambdaStarBracket estimate_lambda_star(const KWProblem& p, double width_tol, const SolverConfig& cfg);

struct MountainPassReport {
    SolutionCandidate second_solution;
    double path_max_energy = 0.0;
    VertexFunction endpoint;
    int deform_steps = 0;
    int path_points_used = 0;
};

/// Second critical point for 0 < lambda < lambda*: a discretized path from u_min to an
/// endpoint of lower energy, relaxed until its highest point is critical, then Newton-polished.
MountainPassReport mountain_pass_solve(const KWProblem& p, const SolutionCandidate& u_min, const SolverConfig& cfg);

}  // namespace kwg

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "detail.hpp"

namespace kwg {

namespace {

using Path = std::vector<Eigen::VectorXd>;

/// Resamples nodes [first, last] of the polyline at equal W^{1,2} arclength, endpoints kept.
void equidistribute(Path& path, std::size_t first, std::size_t last, const Eigen::MatrixXd& metric) {
    if (last <= first + 1) return;
    const std::size_t m = last - first;
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t k = 1; k <= m; ++k) {
        const Eigen::VectorXd d = path[first + k] - path[first + k - 1];
        cum[k] = cum[k - 1] + std::sqrt(std::max(0.0, d.dot(metric * d)));
    }
    const double total = cum[m];
    if (!(total > 0.0)) return;

    Path resampled;
    resampled.reserve(m - 1);
    std::size_t seg = 1;
    for (std::size_t j = 1; j < m; ++j) {
        const double s = total * static_cast<double>(j) / static_cast<double>(m);
        while (seg < m && cum[seg] < s) ++seg;
        const double len = cum[seg] - cum[seg - 1];
        const double w = len > 0.0 ? (s - cum[seg - 1]) / len : 0.0;
        resampled.push_back((1.0 - w) * path[first + seg - 1] + w * path[first + seg]);
    }
    for (std::size_t j = 1; j < m; ++j) path[first + j] = std::move(resampled[j - 1]);
}

/// Gershgorin bound on the Hessian operator at u, used as the inverse step length.
double hessian_bound(const KWProblem& p, const Eigen::VectorXd& u) {
    const auto& g = p.graph();
    double lap = 0.0;
    double pot = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        lap = std::max(lap, 2.0 * g.degree(x) / g.measure(x));
        pot = std::max(pot, std::abs(p.K()[x] + p.lambda()) * std::exp(2.0 * u[static_cast<Eigen::Index>(x)]));
    }
    return 2.0 * (lap + 2.0 * pot);
}

struct Relaxed {
    Eigen::VectorXd top;
    double top_energy;
    int steps;
};

/// Moves the highest interior node along the gradient with its tangential component
/// reversed, so it climbs along the path while descending across it, then re-spaces the
/// nodes on either side of it. Stops once the gradient there is below mp_deform_tol.
Relaxed relax_path(const KWProblem& p, Path& path, const SolverConfig& cfg) {
    const auto& g = p.graph();
    const Eigen::VectorXd& mu = g.measures();
    Eigen::MatrixXd metric = g.stiffness();
    metric.diagonal() += mu;
    const std::size_t last = path.size() - 1;

    for (int step = 0; step <= cfg.mp_max_deforms; ++step) {
        std::size_t top = 1;
        double top_energy = -kInfinity;
        for (std::size_t i = 1; i < last; ++i) {
            const double e = energy(p, VertexFunction(path[i]));
            if (e > top_energy) {
                top_energy = e;
                top = i;
            }
        }
        const Eigen::VectorXd grad = energy_gradient(p, VertexFunction(path[top])).values();
        const double grad_norm = std::sqrt(grad.dot(mu.cwiseProduct(grad)));
        if (grad_norm <= cfg.mp_deform_tol) return {path[top], top_energy, step};
        if (step == cfg.mp_max_deforms) break;

        Eigen::VectorXd tangent = path[top + 1] - path[top - 1];
        const double tnorm = std::sqrt(tangent.dot(mu.cwiseProduct(tangent)));
        Eigen::VectorXd dir = -grad;
        if (tnorm > 0.0) {
            tangent /= tnorm;
            dir += 2.0 * grad.dot(mu.cwiseProduct(tangent)) * tangent;
        }
        double alpha = 1.0 / hessian_bound(p, path[top]);
        Eigen::VectorXd moved = path[top] + alpha * dir;
        while (2.0 * moved.maxCoeff() > kMaxExponent) {
            alpha *= 0.5;
            moved = path[top] + alpha * dir;
        }
        path[top] = std::move(moved);
        equidistribute(path, 0, top, metric);
        equidistribute(path, top, last, metric);
    }
    std::ostringstream os;
    os << "gradient at the path maximum still above " << cfg.mp_deform_tol << " after " << cfg.mp_max_deforms
       << " deformations";
    throw KwError(ErrorCode::DeformationStalled, os.str());
}

}  // namespace

MountainPassReport mountain_pass_solve(const KWProblem& p, const SolutionCandidate& u_min, const SolverConfig& cfg) {
    cfg.validate();
    const auto& g = p.graph();
    require_domain(g, u_min.u, "u_min");
    if (!(p.lambda() > 0.0)) throw KwError(ErrorCode::PreconditionViolated, "mountain pass needs lambda > 0");
    if (!(u_min.hessian_min_eig > 0.0)) {
        throw KwError(ErrorCode::PreconditionViolated, "u_min is not a strict local minimum");
    }

    // Endpoint t * 1_{V_eps}, V_eps = {K_lambda > lambda/2}: E(t f) -> -infinity as t grows.
    const double eps = 0.5 * p.lambda();
    const auto klam = k_lambda(p);
    VertexFunction indicator = VertexFunction::zero(g);
    for (std::size_t x = 0; x < g.size(); ++x) indicator[x] = klam[x] > eps ? 1.0 : 0.0;
    if (indicator.values().sum() == 0.0) throw KwError(ErrorCode::EndpointSearchFailure, "V_eps is empty");

    const double e_min = energy(p, u_min.u);
    VertexFunction endpoint;
    double e_end = 0.0;
    for (double t = 1.0;; t *= 2.0) {
        if (2.0 * t > kMaxExponent) {
            throw KwError(ErrorCode::EndpointSearchFailure, "no t with E(t f) < E(u_min) - 1 before overflow");
        }
        VertexFunction candidate(t * indicator.values());
        e_end = energy(p, candidate);
        if (e_end < e_min - 1.0) {
            endpoint = std::move(candidate);
            break;
        }
    }

    std::mt19937_64 rng(cfg.rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::VectorXd chord = endpoint.values() - u_min.u.values();
    const double chord_sup = chord.cwiseAbs().maxCoeff();

    int points = cfg.path_points;
    for (int attempt = 0; attempt < 2; ++attempt, points *= 2) {
        // Second attempt: twice the nodes and a seeded random bend of the initial segment.
        Eigen::VectorXd bend = Eigen::VectorXd::Zero(chord.size());
        if (attempt > 0) {
            for (Eigen::Index i = 0; i < bend.size(); ++i) bend[i] = 0.1 * chord_sup * normal(rng);
        }
        Path path(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(points - 1);
            path[static_cast<std::size_t>(i)] = u_min.u.values() + s * chord + std::sin(M_PI * s) * bend;
        }

        const auto relaxed = relax_path(p, path, cfg);
        auto polished = newton_polish(p, VertexFunction(relaxed.top), cfg);
        if (!polished) {
            throw KwError(ErrorCode::ConvergenceFailure, "Newton polish of the mountain-pass point failed");
        }
        if (detail::sup_norm(polished->values() - u_min.u.values()) <= 10.0 * cfg.residual_tol) continue;

        MountainPassReport report;
        report.second_solution = make_candidate(p, *polished);
        report.path_max_energy = std::max({relaxed.top_energy, e_min, e_end});
        report.endpoint = endpoint;
        report.deform_steps = relaxed.steps;
        report.path_points_used = points;
        return report;
    }
    throw KwError(ErrorCode::CollapsedToMinimum, "Newton polish returned to u_min on every attempt");
}

}  // namespace kwg

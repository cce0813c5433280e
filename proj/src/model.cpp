#include "kwgraph/model.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "kwgraph/errors.hpp"

namespace kwg {

namespace {

/// e^{2u} pointwise, refusing exponents above kMaxExponent.
Eigen::VectorXd exp2u(const WeightedGraph& g, const VertexFunction& u) {
    Eigen::VectorXd out(u.values().size());
    for (std::size_t x = 0; x < u.size(); ++x) {
        const double e = 2.0 * u[x];
        if (e > kMaxExponent || std::isnan(e)) {
            std::ostringstream os;
            os << "e^{2u} at vertex '" << g.id(x) << "' with u = " << u[x];
            throw KwError(ErrorCode::Overflow, os.str());
        }
        out[static_cast<Eigen::Index>(x)] = std::exp(e);
    }
    return out;
}

}  // namespace

KWProblem::KWProblem(WeightedGraph graph, VertexFunction kappa, VertexFunction K, double lambda, Mode mode)
    : graph_(std::move(graph)), kappa_(std::move(kappa)), K_(std::move(K)), lambda_(lambda), mode_(mode) {
    require_domain(graph_, kappa_, "kappa");
    require_domain(graph_, K_, "K");
    if (!kappa_.all_finite() || !K_.all_finite() || !std::isfinite(lambda_)) {
        throw KwError(ErrorCode::NonFiniteValue, "problem coefficients must be finite");
    }
    if (mode_ == Mode::Relaxed) return;

    const double kappa_int = integrate(graph_, kappa_);
    if (!(kappa_int < 0.0)) {
        std::ostringstream os;
        os << "integral of kappa must be negative, got " << kappa_int;
        throw KwError(ErrorCode::HypothesesViolated, os.str());
    }
    if (max_K() != 0.0) {
        std::ostringstream os;
        os << "max K must be 0, got " << max_K();
        throw KwError(ErrorCode::HypothesesViolated, os.str());
    }
    if (!(min_K() < 0.0)) throw KwError(ErrorCode::HypothesesViolated, "K must be non-constant");
}

KWProblem KWProblem::with_lambda(double lambda) const {
    KWProblem copy = *this;
    if (!std::isfinite(lambda)) throw KwError(ErrorCode::NonFiniteValue, "lambda must be finite");
    copy.lambda_ = lambda;
    return copy;
}

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::LocalMin: return "local_min";
        case Classification::Saddle: return "saddle";
        case Classification::Unclassified: return "unclassified";
    }
    return "unclassified";
}

VertexFunction k_lambda(const KWProblem& p) {
    return VertexFunction((p.K().values().array() + p.lambda()).matrix());
}

VertexFunction residual(const KWProblem& p, const VertexFunction& u) {
    const auto& g = p.graph();
    require_domain(g, u, "u");
    const auto e2u = exp2u(g, u);
    const auto klam = k_lambda(p);
    auto out = laplacian(g, u);
    for (std::size_t x = 0; x < g.size(); ++x) {
        out[x] += p.kappa()[x] - klam[x] * e2u[static_cast<Eigen::Index>(x)];
    }
    if (!out.all_finite()) throw KwError(ErrorCode::Overflow, "residual is not finite");
    return out;
}

double energy(const KWProblem& p, const VertexFunction& u) {
    const auto& g = p.graph();
    require_domain(g, u, "u");
    const auto e2u = exp2u(g, u);
    const auto klam = k_lambda(p);
    VertexFunction lower_order(Eigen::VectorXd(u.values().size()));
    for (std::size_t x = 0; x < g.size(); ++x) {
        lower_order[x] = 2.0 * p.kappa()[x] * u[x] - klam[x] * e2u[static_cast<Eigen::Index>(x)];
    }
    const double e = integrate(g, gradient_form(g, u, u)) + integrate(g, lower_order);
    if (!std::isfinite(e)) throw KwError(ErrorCode::Overflow, "energy is not finite");
    return e;
}

double energy_difference(const KWProblem& p, const VertexFunction& u, const VertexFunction& d) {
    const auto& g = p.graph();
    require_domain(g, u, "u");
    require_domain(g, d, "step");
    exp2u(g, VertexFunction(u.values() + d.values()));
    const auto e2u = exp2u(g, u);
    const auto klam = k_lambda(p);
    const auto cross = gradient_form(g, u, d);
    const auto quad = gradient_form(g, d, d);
    double acc = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        const double pointwise = 2.0 * cross[x] + quad[x] + 2.0 * p.kappa()[x] * d[x] -
                                 klam[x] * e2u[static_cast<Eigen::Index>(x)] * std::expm1(2.0 * d[x]);
        acc += g.measure(x) * pointwise;
    }
    if (!std::isfinite(acc)) throw KwError(ErrorCode::Overflow, "energy difference is not finite");
    return acc;
}

VertexFunction energy_gradient(const KWProblem& p, const VertexFunction& u) {
    auto r = residual(p, u);
    r.values() *= 2.0;
    return r;
}

double hessian_quadratic_form(const KWProblem& p, const VertexFunction& u, const VertexFunction& h) {
    const auto& g = p.graph();
    require_domain(g, u, "u");
    require_domain(g, h, "h");
    const auto e2u = exp2u(g, u);
    const auto klam = k_lambda(p);
    VertexFunction potential(Eigen::VectorXd(u.values().size()));
    for (std::size_t x = 0; x < g.size(); ++x) {
        potential[x] = -2.0 * klam[x] * e2u[static_cast<Eigen::Index>(x)] * h[x] * h[x];
    }
    return 2.0 * (integrate(g, gradient_form(g, h, h)) + integrate(g, potential));
}

Eigen::MatrixXd hessian_matrix(const KWProblem& p, const VertexFunction& u) {
    const auto& g = p.graph();
    require_domain(g, u, "u");
    const auto e2u = exp2u(g, u);
    const auto klam = k_lambda(p);
    const Eigen::VectorXd inv_sqrt_mu = g.measures().array().rsqrt();
    Eigen::MatrixXd b = 2.0 * inv_sqrt_mu.asDiagonal() * g.stiffness() * inv_sqrt_mu.asDiagonal();
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto i = static_cast<Eigen::Index>(x);
        b(i, i) -= 4.0 * klam[x] * e2u[i];
    }
    return b;
}

Eigen::VectorXd hessian_spectrum(const KWProblem& p, const VertexFunction& u) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian_matrix(p, u), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw KwError(ErrorCode::ConvergenceFailure, "dense eigensolver failed");
    return es.eigenvalues();
}

namespace {

/// Shifted inverse iteration: the shift sits below the Gershgorin lower bound, so
/// B - shift is positive definite and the iteration converges to the smallest eigenvalue.
double min_eig_inverse_iteration(const Eigen::MatrixXd& b, int max_iters) {
    const auto n = b.rows();
    double lower = kInfinity;
    double upper = -kInfinity;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double radius = b.row(i).cwiseAbs().sum() - std::abs(b(i, i));
        lower = std::min(lower, b(i, i) - radius);
        upper = std::max(upper, b(i, i) + radius);
    }
    const double scale = std::max({1.0, std::abs(lower), std::abs(upper)});
    const double shift = lower - 1e-3 * scale;
    Eigen::MatrixXd shifted = b;
    shifted.diagonal().array() -= shift;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) throw KwError(ErrorCode::ConvergenceFailure, "shifted Hessian not positive definite");

    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    // break symmetry with a fixed, non-constant start
    for (Eigen::Index i = 0; i < n; ++i) x[i] += 1e-3 * static_cast<double>(i + 1) / static_cast<double>(n);
    x.normalize();
    const double tol = 1e-10 * scale;
    for (int it = 0; it < max_iters; ++it) {
        x = llt.solve(x);
        x.normalize();
        const Eigen::VectorXd bx = b * x;
        const double theta = x.dot(bx);
        if ((bx - theta * x).norm() <= tol) return theta;
    }
    throw KwError(ErrorCode::ConvergenceFailure, "inverse iteration did not converge");
}

}  // namespace

double hessian_min_eigenvalue(const KWProblem& p, const VertexFunction& u, EigenMethod method, int max_iters) {
    if (method == EigenMethod::Dense) return hessian_spectrum(p, u)[0];
    return min_eig_inverse_iteration(hessian_matrix(p, u), max_iters);
}

Classification classify(double min_eig, double scale) {
    const double margin = kClassificationMargin * scale;
    if (min_eig > margin) return Classification::LocalMin;
    if (min_eig < -margin) return Classification::Saddle;
    return Classification::Unclassified;
}

SolutionCandidate make_candidate(const KWProblem& p, const VertexFunction& u) {
    SolutionCandidate c;
    c.u = u;
    c.residual_sup = lp_norm(p.graph(), residual(p, u), kInfinity);
    c.energy = energy(p, u);
    const auto spectrum = hessian_spectrum(p, u);
    c.hessian_min_eig = spectrum[0];
    c.hessian_scale = spectrum.cwiseAbs().maxCoeff();
    c.classification = classify(c.hessian_min_eig, c.hessian_scale);
    return c;
}

bool infeasibility_certificate(const KWProblem& p) {
    return k_lambda(p).values().minCoeff() >= 0.0 && integrate(p.graph(), p.kappa()) < 0.0;
}

double solution_identity_gap(const KWProblem& p, const VertexFunction& u) {
    const auto& g = p.graph();
    require_domain(g, u, "u");
    const auto e2u = exp2u(g, u);
    const auto klam = k_lambda(p);
    VertexFunction weighted(Eigen::VectorXd(u.values().size()));
    for (std::size_t x = 0; x < g.size(); ++x) weighted[x] = klam[x] * e2u[static_cast<Eigen::Index>(x)];
    return std::abs(integrate(g, weighted) - integrate(g, p.kappa()));
}

bool solution_identity_check(const KWProblem& p, const VertexFunction& u, double tol) {
    return solution_identity_gap(p, u) <= tol;
}

}  // namespace kwg

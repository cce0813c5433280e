#include "kwgraph/oracle.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <random>

#include "kwgraph/errors.hpp"

namespace kwg::oracle {

VertexFunction literal_laplacian(const WeightedGraph& g, const VertexFunction& f) {
    require_domain(g, f);
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
    for (const auto& e : g.edges()) {
        sums[static_cast<Eigen::Index>(e.a)] += e.weight * (f[e.a] - f[e.b]);
        sums[static_cast<Eigen::Index>(e.b)] += e.weight * (f[e.b] - f[e.a]);
    }
    for (std::size_t x = 0; x < g.size(); ++x) sums[static_cast<Eigen::Index>(x)] /= g.measure(x);
    return VertexFunction(std::move(sums));
}

VertexFunction literal_residual(const KWProblem& p, const VertexFunction& u) {
    const auto& g = p.graph();
    auto out = literal_laplacian(g, u);
    for (std::size_t x = 0; x < g.size(); ++x) {
        out[x] = out[x] + p.kappa()[x] - (p.K()[x] + p.lambda()) * std::exp(2.0 * u[x]);
    }
    return out;
}

double literal_energy(const KWProblem& p, const VertexFunction& u) {
    const auto& g = p.graph();
    require_domain(g, u);
    // int |grad u|^2 dmu = sum_x (1/2) sum_{y~x} omega (u(x)-u(y))^2 = sum over edges omega (u_a-u_b)^2
    double dirichlet = 0.0;
    for (const auto& e : g.edges()) dirichlet += e.weight * (u[e.a] - u[e.b]) * (u[e.a] - u[e.b]);
    double rest = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        rest += g.measure(x) * (2.0 * p.kappa()[x] * u[x] - (p.K()[x] + p.lambda()) * std::exp(2.0 * u[x]));
    }
    return dirichlet + rest;
}

namespace {

struct TwoVertex {
    double wa;  // omega / mu_a
    double wb;  // omega / mu_b
    double kappa_a, kappa_b;
    double k_a, k_b;  // K_lambda

    std::array<double, 2> residual(double a, double b) const {
        return {wa * (a - b) + kappa_a - k_a * std::exp(2.0 * a), wb * (b - a) + kappa_b - k_b * std::exp(2.0 * b)};
    }
};

/// Damped 2x2 Newton; empty result on failure.
std::optional<std::array<double, 2>> newton_2v(const TwoVertex& s, double a, double b, double tol) {
    auto merit = [](const std::array<double, 2>& f) { return f[0] * f[0] + f[1] * f[1]; };
    auto f = s.residual(a, b);
    for (int it = 0; it < 200; ++it) {
        if (std::max(std::abs(f[0]), std::abs(f[1])) <= tol) return std::array{a, b};
        const double j11 = s.wa - 2.0 * s.k_a * std::exp(2.0 * a);
        const double j12 = -s.wa;
        const double j21 = -s.wb;
        const double j22 = s.wb - 2.0 * s.k_b * std::exp(2.0 * b);
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || det == 0.0) return std::nullopt;
        const double da = -(j22 * f[0] - j12 * f[1]) / det;
        const double db = -(-j21 * f[0] + j11 * f[1]) / det;
        const double m0 = merit(f);
        double t = 1.0;
        for (; t > 1e-12; t *= 0.5) {
            const double na = a + t * da;
            const double nb = b + t * db;
            if (2.0 * std::max(na, nb) > 700.0) continue;
            const auto nf = s.residual(na, nb);
            if (merit(nf) <= (1.0 - 1e-4 * t) * m0) {
                a = na;
                b = nb;
                f = nf;
                break;
            }
        }
        if (t <= 1e-12) return std::nullopt;
    }
    return std::nullopt;
}

bool straddles(double v0, double v1, double v2, double v3) {
    const double lo = std::min({v0, v1, v2, v3});
    const double hi = std::max({v0, v1, v2, v3});
    return lo <= 0.0 && hi >= 0.0;
}

}  // namespace

OracleSolutionSet brute_force_solve_2v(const KWProblem& p, double R, double step, double polish_tol) {
    const auto& g = p.graph();
    if (g.size() != 2) throw KwError(ErrorCode::NotTwoVertices, "brute force needs exactly 2 vertices");
    if (!(R > 0.0) || !(step > 0.0) || !(polish_tol > 0.0)) {
        throw KwError(ErrorCode::InvalidConfig, "scan radius, step and polish tolerance must be positive");
    }
    const double w = g.edges().front().weight;
    const TwoVertex sys{w / g.measure(0), w / g.measure(1), p.kappa()[0], p.kappa()[1],
                        p.K()[0] + p.lambda(), p.K()[1] + p.lambda()};

    const auto n = static_cast<std::size_t>(std::ceil(2.0 * R / step - 1e-9));
    std::vector<double> axis(n + 1);
    std::vector<double> ex(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        axis[i] = -R + 2.0 * R * static_cast<double>(i) / static_cast<double>(n);
        ex[i] = std::exp(2.0 * axis[i]);
    }
    // residual components on the grid; row index = vertex a coordinate
    std::vector<double> fa((n + 1) * (n + 1));
    std::vector<double> fb((n + 1) * (n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            const double diff = axis[i] - axis[j];
            fa[i * (n + 1) + j] = sys.wa * diff + sys.kappa_a - sys.k_a * ex[i];
            fb[i * (n + 1) + j] = -sys.wb * diff + sys.kappa_b - sys.k_b * ex[j];
        }
    }

    OracleSolutionSet out;
    out.scan_radius = R;
    out.grid_step = 2.0 * R / static_cast<double>(n);
    out.polish_tol = polish_tol;
    const double dedup = std::max(1e-8, 100.0 * polish_tol);
    auto record = [&](const std::array<double, 2>& s) {
        if (std::abs(s[0]) > R || std::abs(s[1]) > R) return;
        for (const auto& known : out.solutions) {
            if (std::max(std::abs(known[0] - s[0]), std::abs(known[1] - s[1])) <= dedup) return;
        }
        Eigen::VectorXd v(2);
        v << s[0], s[1];
        out.solutions.emplace_back(std::move(v));
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto k00 = i * (n + 1) + j;
            const auto k01 = k00 + 1;
            const auto k10 = k00 + n + 1;
            const auto k11 = k10 + 1;
            if (!straddles(fa[k00], fa[k01], fa[k10], fa[k11])) continue;
            if (!straddles(fb[k00], fb[k01], fb[k10], fb[k11])) continue;
            const std::array<std::array<double, 2>, 5> starts{{{0.5 * (axis[i] + axis[i + 1]), 0.5 * (axis[j] + axis[j + 1])},
                                                               {axis[i], axis[j]},
                                                               {axis[i + 1], axis[j]},
                                                               {axis[i], axis[j + 1]},
                                                               {axis[i + 1], axis[j + 1]}}};
            for (const auto& s : starts) {
                if (auto sol = newton_2v(sys, s[0], s[1], polish_tol)) record(*sol);
            }
        }
    }
    std::sort(out.solutions.begin(), out.solutions.end(),
              [](const VertexFunction& a, const VertexFunction& b) { return a[0] < b[0]; });
    return out;
}

VertexFunction finite_difference_gradient(const KWProblem& p, const VertexFunction& u, double t) {
    const auto& g = p.graph();
    require_domain(g, u);
    VertexFunction out = VertexFunction::zero(g);
    for (std::size_t x = 0; x < g.size(); ++x) {
        VertexFunction plus = u;
        VertexFunction minus = u;
        plus[x] += t;
        minus[x] -= t;
        out[x] = (literal_energy(p, plus) - literal_energy(p, minus)) / (2.0 * t) / g.measure(x);
    }
    return out;
}

namespace {

/// Gaussian elimination without pivoting. For a strictly row diagonally dominant matrix with
/// nonpositive off-diagonal entries (an M-matrix) every update adds terms of one sign, so a
/// nonnegative right-hand side gives a solution whose computed signs are exact.
Eigen::VectorXd eliminate(Eigen::MatrixXd a, Eigen::VectorXd b) {
    const auto n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!(a(k, k) > 0.0)) throw KwError(ErrorCode::SingularSolveFailure, "Delta + c has a non-positive pivot");
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (a(i, k) == 0.0) continue;
            const double f = a(i, k) / a(k, k);
            for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            a(i, k) = 0.0;
            b[i] -= f * b[k];
        }
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double sum = b[i];
        for (Eigen::Index j = i + 1; j < n; ++j) sum -= a(i, j) * x[j];
        x[i] = sum / a(i, i);
    }
    return x;
}

}  // namespace

bool max_principle_trial(const WeightedGraph& g, double c, int trials, std::uint64_t seed, MaxPrincipleStats* stats) {
    if (!(c > 0.0)) throw KwError(ErrorCode::InvalidConfig, "maximum principle trials need c > 0");
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        const auto a = static_cast<Eigen::Index>(e.a);
        const auto b = static_cast<Eigen::Index>(e.b);
        op(a, a) += e.weight / g.measure(e.a);
        op(b, b) += e.weight / g.measure(e.b);
        op(a, b) -= e.weight / g.measure(e.a);
        op(b, a) -= e.weight / g.measure(e.b);
    }
    op.diagonal().array() += c;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pattern(0, 3);
    std::uniform_int_distribution<Eigen::Index> vertex(0, n - 1);
    constexpr double slack = 1e-12;

    MaxPrincipleStats local;
    local.min_value = kInfinity;
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        switch (pattern(rng)) {
            case 0:  // identically zero
                break;
            case 1:
                for (Eigen::Index i = 0; i < n; ++i) rhs[i] = unit(rng);
                break;
            case 2:
                for (Eigen::Index i = 0; i < n; ++i) rhs[i] = unit(rng) < 0.5 ? unit(rng) : 0.0;
                break;
            default:
                rhs[vertex(rng)] = 0.1 + unit(rng);
                break;
        }
        const Eigen::VectorXd u = eliminate(op, rhs);
        const double lo = u.minCoeff();
        local.min_value = std::min(local.min_value, lo);
        // weak principle
        bool ok = lo >= -slack;
        // strong principle: vanishing anywhere forces u == 0, impossible when g != 0
        if (rhs.maxCoeff() > 0.0 && lo <= 0.0) ok = ok && u.maxCoeff() <= slack;
        if (rhs.maxCoeff() == 0.0) ok = ok && u.cwiseAbs().maxCoeff() <= slack;
        ++local.trials;
        if (!ok) ++local.failures;
    }
    if (stats) *stats = local;
    return local.failures == 0;
}

}  // namespace kwg::oracle

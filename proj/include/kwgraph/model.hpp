#pragma once

#include <string_view>

#include "kwgraph/graph.hpp"

namespace kwg {

enum class Mode { Strict, Relaxed };

/// Data of the Kazdan-Warner problem  Delta u + kappa - K_lambda e^{2u} = 0,  K_lambda = K + lambda.
///
/// In strict mode the constructor enforces int kappa dmu < 0, max K = 0 exactly and
/// K non-constant. K is never shifted to satisfy max K = 0; callers normalize.
/// Relaxed mode only checks domains and finiteness, for auxiliary problems.
class KWProblem {
public:
    KWProblem(WeightedGraph graph, VertexFunction kappa, VertexFunction K, double lambda, Mode mode = Mode::Strict);

    const WeightedGraph& graph() const { return graph_; }
    const VertexFunction& kappa() const { return kappa_; }
    const VertexFunction& K() const { return K_; }
    double lambda() const { return lambda_; }
    Mode mode() const { return mode_; }
    bool strict() const { return mode_ == Mode::Strict; }

    double min_K() const { return K_.values().minCoeff(); }
    double max_K() const { return K_.values().maxCoeff(); }

    /// Same graph and coefficients at another lambda.
    KWProblem with_lambda(double lambda) const;

private:
    WeightedGraph graph_;
    VertexFunction kappa_;
    VertexFunction K_;
    double lambda_;
    Mode mode_;
};

enum class Classification { LocalMin, Saddle, Unclassified };

std::string_view to_string(Classification c);

struct SolutionCandidate {
    VertexFunction u;
    double residual_sup = 0.0;
    double energy = 0.0;
    double hessian_min_eig = 0.0;
    /// largest |eigenvalue| of the Hessian operator, the reference for classification
    double hessian_scale = 0.0;
    Classification classification = Classification::Unclassified;
};

struct OrderInterval {
    VertexFunction lower;
    VertexFunction upper;
};

/// Largest admissible 2u before e^{2u} is refused.
inline constexpr double kMaxExponent = 700.0;

/// Relative margin on the smallest Hessian eigenvalue used by classify().
inline constexpr double kClassificationMargin = 1e-9;

VertexFunction k_lambda(const KWProblem& p);

/// Pointwise Delta u + kappa - K_lambda e^{2u}. Throws Overflow when some 2u(x) > 700.
VertexFunction residual(const KWProblem& p, const VertexFunction& u);

/// E(u) = int (|grad u|^2 + 2 kappa u - K_lambda e^{2u}) dmu.
double energy(const KWProblem& p, const VertexFunction& u);

/// E(u + d) - E(u), evaluated without cancellation between the two energies.
double energy_difference(const KWProblem& p, const VertexFunction& u, const VertexFunction& d);

/// mu-inner-product gradient of E: 2 (Delta u + kappa - K_lambda e^{2u}) = 2 residual.
VertexFunction energy_gradient(const KWProblem& p, const VertexFunction& u);

/// d^2E(u)(h,h) = 2 int (|grad h|^2 - 2 K_lambda e^{2u} h^2) dmu.
double hessian_quadratic_form(const KWProblem& p, const VertexFunction& u, const VertexFunction& h);

/// Symmetric matrix of the Hessian operator h -> 2(Delta h - 2 K_lambda e^{2u} h) in the
/// mu-orthonormal basis e_x / sqrt(mu(x)); its eigenvalues are those of the operator.
Eigen::MatrixXd hessian_matrix(const KWProblem& p, const VertexFunction& u);

/// All eigenvalues of the Hessian operator, ascending.
Eigen::VectorXd hessian_spectrum(const KWProblem& p, const VertexFunction& u);

enum class EigenMethod { Dense, InverseIteration };

/// Smallest eigenvalue of h -> 2(Delta h - 2 K_lambda e^{2u} h), self-adjoint for the mu inner product.
/// InverseIteration throws ConvergenceFailure after max_iters sweeps.
double hessian_min_eigenvalue(const KWProblem& p, const VertexFunction& u,
                              EigenMethod method = EigenMethod::Dense, int max_iters = 20000);

Classification classify(double min_eig, double scale);

/// Residual, energy and Hessian data of u in one record.
SolutionCandidate make_candidate(const KWProblem& p, const VertexFunction& u);

/// True iff min K_lambda >= 0 and int kappa dmu < 0: summing the equation then gives
/// int K_lambda e^{2u} dmu = int kappa dmu < 0, which cannot hold. False means "no certificate".
bool infeasibility_certificate(const KWProblem& p);

/// |int K_lambda e^{2u} dmu - int kappa dmu| <= tol. Necessary for any solution.
bool solution_identity_check(const KWProblem& p, const VertexFunction& u, double tol);

/// The value |int K_lambda e^{2u} dmu - int kappa dmu| tested above.
double solution_identity_gap(const KWProblem& p, const VertexFunction& u);

}  // namespace kwg

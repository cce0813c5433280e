#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace kwg {

struct VertexSpec {
    std::string id;
    double measure = 1.0;
};

struct EdgeSpec {
    std::string from;
    std::string to;
    double weight = 1.0;
};

/// Finite connected graph with positive vertex measure mu and symmetric
/// positive edge weights omega. Immutable once built; copies share storage.
///
/// Vertex order is insertion order. That order defines the vector view used
/// by every operator and solver, and all sums run over it.
class WeightedGraph {
public:
    struct Neighbor {
        std::size_t vertex;
        double weight;
    };

    struct Edge {
        std::size_t a;
        std::size_t b;
        double weight;
    };

    /// Validates and builds. Throws KwError naming the offending vertex or edge.
    static WeightedGraph build(const std::vector<VertexSpec>& vertices,
                               const std::vector<EdgeSpec>& edges);

    std::size_t size() const { return impl_->ids.size(); }
    const std::vector<std::string>& ids() const { return impl_->ids; }
    const std::string& id(std::size_t i) const { return impl_->ids[i]; }
    std::optional<std::size_t> index_of(std::string_view id) const;

    double measure(std::size_t i) const { return impl_->measure[i]; }
    const Eigen::VectorXd& measures() const { return impl_->measure; }
    double total_measure() const { return impl_->total_measure; }

    /// Weighted degree sum_{y~x} omega_xy.
    double degree(std::size_t i) const { return impl_->degree[i]; }

    std::span<const Neighbor> neighbors(std::size_t i) const { return impl_->adjacency[i]; }
    const std::vector<Edge>& edges() const { return impl_->edges; }

    /// omega_xy looked up by unordered pair; empty when x and y are not adjacent.
    std::optional<double> weight(std::size_t x, std::size_t y) const;
    std::optional<double> weight(std::string_view x, std::string_view y) const;

    /// Stiffness matrix S = D - W, so that Delta = M^{-1} S with M = diag(mu).
    /// Symmetric positive semidefinite with kernel the constants.
    const Eigen::MatrixXd& stiffness() const { return impl_->stiffness; }

    bool same_as(const WeightedGraph& other) const { return impl_ == other.impl_; }

private:
    struct Impl {
        std::vector<std::string> ids;
        std::map<std::string, std::size_t, std::less<>> index;
        Eigen::VectorXd measure;
        Eigen::VectorXd degree;
        double total_measure = 0.0;
        std::vector<std::vector<Neighbor>> adjacency;
        std::vector<Edge> edges;
        std::map<std::pair<std::size_t, std::size_t>, double> pair_weight;
        Eigen::MatrixXd stiffness;
    };

    explicit WeightedGraph(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

/// Real-valued function on the vertex set, stored in the graph's vertex order.
class VertexFunction {
public:
    VertexFunction() = default;
    explicit VertexFunction(Eigen::VectorXd values) : values_(std::move(values)) {}

    static VertexFunction constant(const WeightedGraph& g, double c) {
        return VertexFunction(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.size()), c));
    }
    static VertexFunction zero(const WeightedGraph& g) { return constant(g, 0.0); }

    /// Builds from an id-keyed map; every vertex must be present and no extra ids allowed.
    static VertexFunction from_map(const WeightedGraph& g, const std::map<std::string, double>& values);

    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }

    bool all_finite() const { return values_.allFinite(); }

    friend bool operator==(const VertexFunction& a, const VertexFunction& b) {
        return a.values_.size() == b.values_.size() && (a.values_.array() == b.values_.array()).all();
    }

private:
    Eigen::VectorXd values_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Throws DomainMismatch unless f is defined on exactly the vertex set of g.
void require_domain(const WeightedGraph& g, const VertexFunction& f, std::string_view what = "function");

/// (Delta f)(x) = (1/mu(x)) sum_{y~x} omega_xy (f(x) - f(y)). Positive semidefinite sign.
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f);

/// Gamma(f,h)(x) = (1/(2 mu(x))) sum_{y~x} omega_xy (f(x)-f(y))(h(x)-h(y)).
VertexFunction gradient_form(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);

/// sum_x mu(x) f(x).
double integrate(const WeightedGraph& g, const VertexFunction& f);

/// l^p_mu norm; p = kInfinity gives max |f|.
double lp_norm(const WeightedGraph& g, const VertexFunction& f, double p);

/// (int (|grad f|^2 + f^2) dmu)^{1/2}.
double sobolev_norm(const WeightedGraph& g, const VertexFunction& f);

/// mu-weighted inner product sum_x mu(x) f(x) h(x).
double inner(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);

}  // namespace kwg

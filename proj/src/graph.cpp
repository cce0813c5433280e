#include "kwgraph/graph.hpp"

#include <cmath>
#include <queue>
#include <sstream>

#include "kwgraph/errors.hpp"

namespace kwg {

namespace {

std::pair<std::size_t, std::size_t> ordered(std::size_t a, std::size_t b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

void require_finite(const VertexFunction& f, std::string_view op) {
    if (!f.all_finite()) {
        throw KwError(ErrorCode::NonFiniteValue, std::string(op) + " produced a non-finite value");
    }
}

}  // namespace

WeightedGraph WeightedGraph::build(const std::vector<VertexSpec>& vertices,
                                   const std::vector<EdgeSpec>& edges) {
    if (vertices.empty()) throw KwError(ErrorCode::EmptyInput, "no vertices given");

    auto impl = std::make_shared<Impl>();
    const auto n = vertices.size();
    impl->measure.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v = vertices[i];
        if (!(v.measure > 0.0) || !std::isfinite(v.measure)) {
            std::ostringstream os;
            os << "vertex '" << v.id << "' has measure " << v.measure;
            throw KwError(ErrorCode::NonPositiveMeasure, os.str());
        }
        if (!impl->index.emplace(v.id, i).second) {
            throw KwError(ErrorCode::DuplicateVertex, "vertex '" + v.id + "' declared twice");
        }
        impl->ids.push_back(v.id);
        impl->measure[static_cast<Eigen::Index>(i)] = v.measure;
    }
    if (n < 2) throw KwError(ErrorCode::SingleVertex, "graph has only vertex '" + vertices.front().id + "'");

    auto lookup = [&](const std::string& id) {
        auto it = impl->index.find(id);
        if (it == impl->index.end()) throw KwError(ErrorCode::UnknownVertex, "edge references undeclared vertex '" + id + "'");
        return it->second;
    };

    impl->adjacency.resize(n);
    for (const auto& e : edges) {
        const auto a = lookup(e.from);
        const auto b = lookup(e.to);
        if (a == b) throw KwError(ErrorCode::SelfLoop, "self-loop at vertex '" + e.from + "'");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            std::ostringstream os;
            os << "edge (" << e.from << ", " << e.to << ") has weight " << e.weight;
            throw KwError(ErrorCode::NonPositiveWeight, os.str());
        }
        auto [it, inserted] = impl->pair_weight.emplace(ordered(a, b), e.weight);
        if (!inserted) {
            if (it->second != e.weight) {
                std::ostringstream os;
                os << "edge (" << e.from << ", " << e.to << ") given with weights " << it->second << " and " << e.weight;
                throw KwError(ErrorCode::DuplicateEdge, os.str());
            }
            continue;
        }
        impl->edges.push_back({a, b, e.weight});
        impl->adjacency[a].push_back({b, e.weight});
        impl->adjacency[b].push_back({a, e.weight});
    }

    // breadth-first reachability from vertex 0
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    seen[0] = true;
    frontier.push(0);
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const auto x = frontier.front();
        frontier.pop();
        for (const auto& nb : impl->adjacency[x]) {
            if (!seen[nb.vertex]) {
                seen[nb.vertex] = true;
                ++reached;
                frontier.push(nb.vertex);
            }
        }
    }
    if (reached != n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!seen[i]) {
                throw KwError(ErrorCode::Disconnected,
                              "vertex '" + impl->ids[i] + "' is unreachable from '" + impl->ids[0] + "'");
            }
        }
    }

    const auto ni = static_cast<Eigen::Index>(n);
    impl->degree = Eigen::VectorXd::Zero(ni);
    impl->stiffness = Eigen::MatrixXd::Zero(ni, ni);
    for (const auto& e : impl->edges) {
        const auto a = static_cast<Eigen::Index>(e.a);
        const auto b = static_cast<Eigen::Index>(e.b);
        impl->degree[a] += e.weight;
        impl->degree[b] += e.weight;
        impl->stiffness(a, a) += e.weight;
        impl->stiffness(b, b) += e.weight;
        impl->stiffness(a, b) -= e.weight;
        impl->stiffness(b, a) -= e.weight;
    }
    impl->total_measure = 0.0;
    for (Eigen::Index i = 0; i < ni; ++i) impl->total_measure += impl->measure[i];

    return WeightedGraph(std::move(impl));
}

std::optional<std::size_t> WeightedGraph::index_of(std::string_view id) const {
    auto it = impl_->index.find(id);
    if (it == impl_->index.end()) return std::nullopt;
    return it->second;
}

std::optional<double> WeightedGraph::weight(std::size_t x, std::size_t y) const {
    auto it = impl_->pair_weight.find(ordered(x, y));
    if (it == impl_->pair_weight.end()) return std::nullopt;
    return it->second;
}

std::optional<double> WeightedGraph::weight(std::string_view x, std::string_view y) const {
    auto a = index_of(x);
    auto b = index_of(y);
    if (!a || !b) return std::nullopt;
    return weight(*a, *b);
}

VertexFunction VertexFunction::from_map(const WeightedGraph& g, const std::map<std::string, double>& values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto it = values.find(g.id(i));
        if (it == values.end()) throw KwError(ErrorCode::DomainMismatch, "no value for vertex '" + g.id(i) + "'");
        v[static_cast<Eigen::Index>(i)] = it->second;
    }
    for (const auto& [id, _] : values) {
        if (!g.index_of(id)) throw KwError(ErrorCode::DomainMismatch, "value given for unknown vertex '" + id + "'");
    }
    return VertexFunction(std::move(v));
}

void require_domain(const WeightedGraph& g, const VertexFunction& f, std::string_view what) {
    if (f.size() != g.size()) {
        std::ostringstream os;
        os << what << " has " << f.size() << " values but the graph has " << g.size() << " vertices";
        throw KwError(ErrorCode::DomainMismatch, os.str());
    }
}

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f) {
    require_domain(g, f);
    VertexFunction out(Eigen::VectorXd(static_cast<Eigen::Index>(g.size())));
    for (std::size_t x = 0; x < g.size(); ++x) {
        double acc = 0.0;
        for (const auto& nb : g.neighbors(x)) acc += nb.weight * (f[x] - f[nb.vertex]);
        out[x] = acc / g.measure(x);
    }
    require_finite(out, "laplacian");
    return out;
}

VertexFunction gradient_form(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
    require_domain(g, f);
    require_domain(g, h);
    VertexFunction out(Eigen::VectorXd(static_cast<Eigen::Index>(g.size())));
    for (std::size_t x = 0; x < g.size(); ++x) {
        double acc = 0.0;
        for (const auto& nb : g.neighbors(x)) acc += nb.weight * ((f[x] - f[nb.vertex]) * (h[x] - h[nb.vertex]));
        out[x] = acc / (2.0 * g.measure(x));
    }
    require_finite(out, "gradient_form");
    return out;
}

double integrate(const WeightedGraph& g, const VertexFunction& f) {
    require_domain(g, f);
    double acc = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) acc += g.measure(x) * f[x];
    return acc;
}

double inner(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
    require_domain(g, f);
    require_domain(g, h);
    double acc = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) acc += g.measure(x) * f[x] * h[x];
    return acc;
}

double lp_norm(const WeightedGraph& g, const VertexFunction& f, double p) {
    require_domain(g, f);
    if (p == kInfinity) {
        double m = 0.0;
        for (std::size_t x = 0; x < g.size(); ++x) m = std::max(m, std::abs(f[x]));
        return m;
    }
    if (!(p >= 1.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "exponent p = " << p << " (need p >= 1 or infinity)";
        throw KwError(ErrorCode::InvalidExponent, os.str());
    }
    double acc = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) acc += g.measure(x) * std::pow(std::abs(f[x]), p);
    return std::pow(acc, 1.0 / p);
}

double sobolev_norm(const WeightedGraph& g, const VertexFunction& f) {
    const auto grad2 = gradient_form(g, f, f);
    const double sq = integrate(g, grad2) + inner(g, f, f);
    return std::sqrt(sq);
}

}  // namespace kwg

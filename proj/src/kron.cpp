#include "kronmix/kron.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kronmix/errors.hpp"

namespace kronmix {

ProductOperator::ProductOperator(StochasticMatrix left, StochasticMatrix right)
    : left_(std::move(left)), right_(std::move(right)) {}

double ProductOperator::at(std::size_t row, std::size_t col) const {
    const std::size_t m = right_.dimension();
    return left_.at(row / m, col / m) * right_.at(row % m, col % m);
}

void ProductOperator::apply_left(std::span<const double> v, std::span<double> out) const {
    const std::size_t n = left_.dimension(), m = right_.dimension();
    if (v.size() != n * m || out.size() != n * m)
        throw DimensionMismatch("ProductOperator::apply_left: vector length");
    thread_local std::vector<double> scratch;
    scratch.assign(n * m, 0.0);
    // scratch_i = v_i' R for every agent block i, then out_j = sum_i L(i,j) scratch_i.
    for (std::size_t i = 0; i < n; ++i)
        right_.sparse().left_multiply(v.subspan(i * m, m), std::span<double>(scratch).subspan(i * m, m));
    std::fill(out.begin(), out.end(), 0.0);
    const auto& L = left_.sparse();
    for (std::size_t i = 0; i < n; ++i) {
        const auto cols = L.row_columns(i);
        const auto vals = L.row_values(i);
        const double* src = scratch.data() + i * m;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            double* dst = out.data() + cols[k] * m;
            const double w = vals[k];
            for (std::size_t u = 0; u < m; ++u) dst[u] += w * src[u];
        }
    }
}

std::size_t ProductOperator::sample_next(std::size_t state, double u) const {
    const std::size_t m = right_.dimension();
    const std::size_t i = state / m, a = state % m;
    const std::size_t j = left_.sample_next(i, u);
    // Reuse the leftover of the inverse-CDF draw as a fresh uniform for the
    // right factor: conditional on choosing j, it is uniform on [0,1).
    const auto& L = left_.sparse();
    const auto cols = L.row_columns(i);
    const auto vals = L.row_values(i);
    double before = 0.0, p = 0.0, total = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        if (cols[k] < j) before += vals[k];
        if (cols[k] == j) p = vals[k];
        total += vals[k];
    }
    double rest = (u * total - before) / p;
    rest = std::clamp(rest, 0.0, std::nextafter(1.0, 0.0));
    return j * m + right_.sample_next(a, rest);
}

StochasticMatrix ProductOperator::materialize(std::size_t cap) const {
    return StochasticMatrix(kron(left_.sparse(), right_.sparse(), cap));
}

SparseMatrix kron(const SparseMatrix& left, const SparseMatrix& right, std::size_t cap) {
    const std::size_t nnz = left.nonzeros() * right.nonzeros();
    if (nnz > cap)
        throw TooLarge("Kronecker product has " + std::to_string(nnz) + " nonzeros (cap " +
                       std::to_string(cap) + ")");
    std::vector<Triplet> t;
    t.reserve(nnz);
    const std::size_t rr = right.rows(), rc = right.cols();
    for (const auto& a : left.triplets())
        for (const auto& b : right.triplets())
            t.push_back({a.row * rr + b.row, a.col * rc + b.col, a.value * b.value});
    return SparseMatrix(left.rows() * rr, left.cols() * rc, std::move(t));
}

std::variant<StochasticMatrix, ProductOperator> kron(const StochasticMatrix& left,
                                                     const StochasticMatrix& right, bool materialize,
                                                     std::size_t cap) {
    if (materialize) return StochasticMatrix(kron(left.sparse(), right.sparse(), cap));
    return ProductOperator(left, right);
}

DirectedGraph kron_graph(const DirectedGraph& g1, const DirectedGraph& g2) {
    const std::size_t m = g2.node_count();
    std::vector<Edge> es;
    es.reserve(g1.edge_count() * g2.edge_count());
    for (const auto& a : g1.edges())
        for (const auto& b : g2.edges())
            es.push_back({pair_index(a.source, b.source, m), pair_index(a.target, b.target, m),
                          a.weight * b.weight});
    return DirectedGraph(g1.node_count() * m, std::move(es), g1.weighted() || g2.weighted(),
                         g1.directed() || g2.directed());
}

ProductSccReport product_scc_check(const DirectedGraph& g1, const DirectedGraph& g2,
                                   const SccDecomposition& product_decomp) {
    ProductSccReport report;
    const std::size_t m = g2.node_count();
    if (product_decomp.component_of.size() != g1.node_count() * m) {
        report.violations.push_back("product decomposition has the wrong node count");
        return report;
    }
    const auto d1 = scc_decompose(g1);
    const auto d2 = scc_decompose(g2);
    report.product_components = product_decomp.count();

    for (std::size_t c = 0; c < product_decomp.count(); ++c) {
        const auto& nodes = product_decomp.components[c];
        const std::size_t s1 = d1.component_of[nodes[0] / m], s2 = d2.component_of[nodes[0] % m];
        for (auto node : nodes) {
            if (d1.component_of[node / m] != s1 || d2.component_of[node % m] != s2) {
                report.violations.push_back("product component " + std::to_string(c) +
                                            " spans several factor component pairs");
                break;
            }
        }
    }

    report.factors_strongly_connected = d1.count() == 1 && d2.count() == 1 && g1.edge_count() > 0 &&
                                        g2.edge_count() > 0;
    if (report.factors_strongly_connected) {
        const std::size_t p1 = d1.period[0], p2 = d2.period[0];
        report.expected_components = std::gcd(p1, p2);
        report.expected_period = std::lcm(p1, p2);
        if (product_decomp.count() != report.expected_components)
            report.violations.push_back("expected " + std::to_string(report.expected_components) +
                                        " product components, found " +
                                        std::to_string(product_decomp.count()));
        for (std::size_t c = 0; c < product_decomp.count(); ++c)
            if (product_decomp.period[c] != report.expected_period)
                report.violations.push_back("product component " + std::to_string(c) + " has period " +
                                            std::to_string(product_decomp.period[c]) + ", expected " +
                                            std::to_string(report.expected_period));
    }
    return report;
}

}  // namespace kronmix

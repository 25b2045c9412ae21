#include <doctest.h>

#include <cmath>
#include <numeric>

#include "kronmix/errors.hpp"
#include "kronmix/kron.hpp"
#include "kronmix/rng.hpp"
#include "oracles.hpp"

using namespace kronmix;

namespace {

DirectedGraph directed_cycle(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t u = 0; u < n; ++u) e.push_back({u, (u + 1) % n});
    return DirectedGraph(n, e);
}

}  // namespace

TEST_CASE("dimension rule and identity") {
    const std::vector<double> a{0.5, 0.5, 0.2, 0.8};
    const std::vector<double> b{1, 0, 0, 0.3, 0.3, 0.4, 0, 0.5, 0.5};
    const auto product = std::get<StochasticMatrix>(kron(StochasticMatrix::from_dense(2, a),
                                                         StochasticMatrix::from_dense(3, b), true));
    CHECK(product.dimension() == 6);
    CHECK(product.at(pair_index(1, 2, 3), pair_index(0, 1, 3)) == doctest::Approx(0.2 * 0.5));

    const auto I = kron(SparseMatrix::identity(3), SparseMatrix::identity(4));
    CHECK(I.rows() == 12);
    CHECK(I.nonzeros() == 12);
    for (std::size_t r = 0; r < 12; ++r) CHECK(I.at(r, r) == 1.0);
}

TEST_CASE("cap exceeded") {
    Rng rng(1);
    const auto A = oracle::random_ergodic(10, 1.0, rng);
    CHECK_THROWS_AS(kron(A, A, true, 50), TooLarge);
    CHECK(std::holds_alternative<ProductOperator>(kron(A, A, false)));
}

TEST_CASE("random products are row-stochastic and match the implicit operator") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto A = oracle::random_ergodic(1 + rng.below(7), 0.4, rng);
        const auto B = oracle::random_ergodic(1 + rng.below(7), 0.4, rng);
        const ProductOperator op(A, B);
        const auto M = op.materialize();
        for (std::size_t r = 0; r < M.dimension(); ++r) CHECK(std::abs(M.sparse().row_sum(r) - 1.0) <= 1e-9);

        std::vector<double> v(op.dimension());
        for (auto& x : v) x = rng.uniform();
        std::vector<double> implicit(op.dimension()), explicit_(op.dimension());
        op.apply_left(v, implicit);
        M.apply_left(v, explicit_);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(implicit[i] - explicit_[i]) <= 1e-12);
        for (std::size_t r = 0; r < op.dimension(); ++r)
            for (std::size_t c = 0; c < op.dimension(); ++c) CHECK(op.at(r, c) == doctest::Approx(M.at(r, c)));
    }
}

TEST_CASE("implicit sampling matches the product row distribution") {
    const std::vector<double> a{0.3, 0.7, 0.6, 0.4};
    const std::vector<double> b{0.1, 0.9, 0.0, 0.2, 0.3, 0.5, 0.5, 0.0, 0.5};
    const ProductOperator op(StochasticMatrix::from_dense(2, a), StochasticMatrix::from_dense(3, b));
    Rng rng(9);
    const std::size_t state = pair_index(1, 1, 3), draws = 200000;
    std::vector<double> counts(6, 0.0);
    for (std::size_t k = 0; k < draws; ++k) counts[op.sample_next(state, rng.uniform())] += 1.0;
    for (std::size_t c = 0; c < 6; ++c) {
        const double p = op.at(state, c);
        const double se = std::sqrt(p * (1 - p) / draws) + 1e-12;
        CHECK(std::abs(counts[c] / draws - p) <= 5 * se);
    }
}

TEST_CASE("mixed-product property") {
    Rng rng(4);
    auto random_sparse = [&](std::size_t n) {
        std::vector<Triplet> t;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (rng.bernoulli(0.6)) t.push_back({r, c, rng.uniform()});
        return SparseMatrix(n, n, t);
    };
    auto to_dense = [](const SparseMatrix& m) {
        oracle::Dense d(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
        const auto v = m.dense();
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) d(r, c) = v[r * m.cols() + c];
        return d;
    };
    for (int t = 0; t < 10; ++t) {
        const auto A = random_sparse(3), B = random_sparse(2), C = random_sparse(3), D = random_sparse(2);
        const oracle::Dense lhs = to_dense(kron(A, B)) * to_dense(kron(C, D));
        const oracle::Dense ac = to_dense(A) * to_dense(C), bd = to_dense(B) * to_dense(D);
        for (Eigen::Index i = 0; i < 3; ++i)
            for (Eigen::Index u = 0; u < 2; ++u)
                for (Eigen::Index j = 0; j < 3; ++j)
                    for (Eigen::Index v = 0; v < 2; ++v)
                        CHECK(std::abs(lhs(i * 2 + u, j * 2 + v) - ac(i, j) * bd(u, v)) <= 1e-12);
    }
}

TEST_CASE("product graph of cycles") {
    SUBCASE("C2 x C3 is one component") {
        const auto g = kron_graph(directed_cycle(2), directed_cycle(3));
        CHECK(g.node_count() == 6);
        CHECK(g.edge_count() == 6);
        CHECK(scc_decompose(g).count() == 1);
    }
    SUBCASE("C2 x C2 splits in two of period 2") {
        const auto g = kron_graph(directed_cycle(2), directed_cycle(2));
        const auto d = scc_decompose(g);
        REQUIRE(d.count() == 2);
        for (std::size_t c = 0; c < 2; ++c) CHECK(oracle::period_by_cycles(g, d.components[c]) == 2);
    }
    SUBCASE("anything with the empty graph is empty") {
        const auto g = kron_graph(directed_cycle(4), DirectedGraph(0, {}));
        CHECK(g.node_count() == 0);
    }
}

TEST_CASE("product SCC structure for strongly connected factors") {
    SUBCASE("C3 x C5") {
        const auto g1 = directed_cycle(3), g2 = directed_cycle(5);
        const auto report = product_scc_check(g1, g2, scc_decompose(kron_graph(g1, g2)));
        CHECK(report.ok());
        CHECK(report.product_components == 1);
        CHECK(report.expected_period == 15);
    }
    SUBCASE("C4 x C6") {
        const auto g1 = directed_cycle(4), g2 = directed_cycle(6);
        const auto product = kron_graph(g1, g2);
        const auto d = scc_decompose(product);
        const auto report = product_scc_check(g1, g2, d);
        CHECK(report.ok());
        CHECK(report.product_components == 2);
        CHECK(report.expected_components == 2);
        CHECK(report.expected_period == 12);
        for (std::size_t c = 0; c < d.count(); ++c) CHECK(oracle::period_by_powers(product, d.components[c]) == 12);
    }
    SUBCASE("aperiodic factors give one spanning component") {
        auto e1 = directed_cycle(4).edges();
        e1.push_back({0, 0});
        auto e2 = directed_cycle(3).edges();
        e2.push_back({1, 1});
        const DirectedGraph g1(4, e1), g2(3, e2);
        const auto d = scc_decompose(kron_graph(g1, g2));
        CHECK(d.count() == 1);
        CHECK(d.components[0].size() == 12);
        CHECK(product_scc_check(g1, g2, d).ok());
    }
}

TEST_CASE("graph of the equal-weight product equals the product graph") {
    Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        const auto g1 = oracle::random_digraph(1 + rng.below(5), 0.4, rng);
        const auto g2 = oracle::random_digraph(1 + rng.below(5), 0.4, rng);
        const auto M = std::get<StochasticMatrix>(kron(equal_weight_matrix(g1), equal_weight_matrix(g2), true));
        CHECK(M.graph().edges().size() == kron_graph(g1, g2).edges().size());
        for (const auto& e : kron_graph(g1, g2).edges()) CHECK(M.graph().has_edge(e.source, e.target));
    }
}

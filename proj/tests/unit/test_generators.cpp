#include <doctest.h>

#include <cmath>

#include "kronmix/errors.hpp"
#include "kronmix/generators.hpp"
#include "kronmix/stochastic.hpp"

using namespace kronmix;

namespace {

TopologySpec make(Family f, std::size_t n, std::size_t k = 0, double p = 0.0, double r = 0.0) {
    TopologySpec s;
    s.family = f;
    s.n = n;
    s.k = k;
    s.p = p;
    s.r = r;
    return s;
}

std::size_t degree_undirected(const DirectedGraph& g, std::size_t u) {
    std::size_t d = 0;
    for (auto v : g.out_neighbors(u)) d += v != u;
    return d;
}

}  // namespace

TEST_CASE("family names round-trip") {
    for (int f = 0; f <= static_cast<int>(Family::Geometric); ++f) {
        const auto family = static_cast<Family>(f);
        CHECK(parse_family(family_name(family)) == family);
    }
    CHECK(parse_family("grid") == Family::Grid);
    CHECK_THROWS_AS(parse_family("moebius"), SpecError);
}

TEST_CASE("directed cycle") {
    auto s = make(Family::Cycle, 5);
    s.directed = true;
    const auto g = generate(s);
    CHECK(g.node_count() == 5);
    CHECK(g.edge_count() == 5);
}

TEST_CASE("hypercube of dimension 3") {
    const auto g = generate(make(Family::Hypercube, 0, 3));
    CHECK(g.node_count() == 8);
    for (std::size_t u = 0; u < 8; ++u) CHECK(g.out_degree(u) == 3);
}

TEST_CASE("Erdos-Renyi degenerate probabilities") {
    const auto full = generate(make(Family::ErdosRenyi, 50, 0, 1.0));
    CHECK(full.edge_count() == 50 * 49);
    const auto none = generate(make(Family::ErdosRenyi, 50, 0, 0.0));
    CHECK(none.edge_count() == 0);
}

TEST_CASE("directed path and star give every node an out-edge") {
    auto path = make(Family::Path, 6);
    path.directed = true;
    auto star = make(Family::Star, 6);
    star.directed = true;
    for (const auto& g : {generate(path), generate(star)})
        for (std::size_t u = 0; u < g.node_count(); ++u) CHECK(g.out_degree(u) >= 1);
    CHECK(generate(path).has_self_loop(5));
    CHECK(generate(star).has_self_loop(0));
}

TEST_CASE("undirected families are symmetric") {
    const TopologySpec specs[] = {
        make(Family::Cycle, 7),           make(Family::Path, 5),          make(Family::Star, 6),
        make(Family::TwoStar, 9),         make(Family::Complete, 5),      make(Family::Dumbbell, 10),
        make(Family::Lollipop, 10),       make(Family::Bolas, 12),        make(Family::BinaryTree, 15),
        make(Family::Hypercube, 0, 4),    make(Family::Grid, 4, 2),       make(Family::Torus, 4, 2),
        make(Family::ErdosRenyi, 20, 0, 0.3), make(Family::NewmanWatts, 20, 2, 0.3),
        make(Family::Geometric, 30, 0, 0.0, 0.3),
    };
    for (const auto& s : specs) {
        CAPTURE(family_name(s.family));
        const auto g = generate(s);
        CHECK(g.node_count() == node_count(s));
        CHECK(g.is_symmetric());
    }
}

TEST_CASE("shapes") {
    SUBCASE("two-star joins the centers") {
        const auto g = generate(make(Family::TwoStar, 8));
        CHECK(g.has_edge(0, 4));
        CHECK(degree_undirected(g, 0) == 4);
        CHECK(degree_undirected(g, 4) == 4);
    }
    SUBCASE("dumbbell: two cliques and one bridge") {
        const auto g = generate(make(Family::Dumbbell, 10));
        CHECK(g.edge_count() == 2 * (2 * 10 + 1));
        CHECK(g.has_edge(4, 5));
    }
    SUBCASE("bolas default bridge") {
        const auto g = generate(make(Family::Bolas, 12));
        // 4 bridge nodes, cliques of 4 and 4: 2*6 clique edges + 5 path edges.
        CHECK(g.edge_count() == 2 * (12 + 5));
    }
    SUBCASE("binary tree") {
        const auto g = generate(make(Family::BinaryTree, 15));
        CHECK(g.edge_count() == 2 * 14);
        CHECK(degree_undirected(g, 0) == 2);
        CHECK(degree_undirected(g, 14) == 1);
    }
    SUBCASE("torus wraps, grid does not") {
        CHECK(generate(make(Family::Torus, 4, 2)).edge_count() == 2 * 32);
        CHECK(generate(make(Family::Grid, 4, 2)).edge_count() == 2 * 24);
    }
    SUBCASE("eulerian ring is balanced") {
        const auto g = generate(make(Family::EulerianRing, 9, 3));
        const auto r = g.reversed();
        for (std::size_t u = 0; u < 9; ++u) {
            CHECK(g.out_degree(u) == 3);
            CHECK(r.out_degree(u) == 3);
        }
    }
}

TEST_CASE("Newman-Watts with p = 0 is the ring") {
    const auto g = generate(make(Family::NewmanWatts, 12, 2, 0.0));
    for (std::size_t u = 0; u < 12; ++u) {
        CHECK(g.out_degree(u) == 4);
        CHECK(g.has_edge(u, (u + 1) % 12));
        CHECK(g.has_edge(u, (u + 2) % 12));
    }
}

TEST_CASE("geometric with the diagonal radius is complete") {
    const auto g = generate(make(Family::Geometric, 25, 0, 0.0, std::sqrt(2.0)));
    CHECK(g.edge_count() == 25 * 24);
}

TEST_CASE("random families are reproducible") {
    for (auto f : {Family::ErdosRenyi, Family::NewmanWatts, Family::Geometric}) {
        auto s = make(f, 40, 2, 0.2, 0.25);
        s.seed = 77;
        CHECK(generate(s).edges() == generate(s).edges());
        auto other = s;
        other.seed = 78;
        CHECK_FALSE(generate(s).edges() == generate(other).edges());
    }
}

TEST_CASE("geometric reports components instead of resampling") {
    const auto g = generate(make(Family::Geometric, 40, 0, 0.0, 0.05));
    CHECK(weak_component_count(g) > 1);
    CHECK(weak_component_count(generate(make(Family::Cycle, 9))) == 1);
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(generate(make(Family::Cycle, 2)), SpecError);
    CHECK_THROWS_AS(generate(make(Family::ErdosRenyi, 10, 0, 1.5)), SpecError);
    CHECK_THROWS_AS(generate(make(Family::Geometric, 10, 0, 0.0, 2.0)), SpecError);
    CHECK_THROWS_AS(generate(make(Family::NewmanWatts, 4, 2, 0.1)), SpecError);
    CHECK_THROWS_AS(generate(make(Family::EulerianRing, 4, 4)), SpecError);
}

TEST_CASE("lazify") {
    SUBCASE("two-cycle becomes aperiodic") {
        auto s = make(Family::Cycle, 2);
        s.directed = true;
        const auto d = scc_decompose(lazify(generate(s), 0.3));
        for (auto p : d.period) CHECK(p == 1);
    }
    SUBCASE("half weight on the diagonal, rows sum to one") {
        for (const auto& s : {make(Family::Star, 9), make(Family::BinaryTree, 31), make(Family::Dumbbell, 10)}) {
            const auto M = equal_weight_matrix(lazify(generate(s), 0.5));
            for (std::size_t u = 0; u < M.dimension(); ++u) {
                CHECK(M.at(u, u) == doctest::Approx(0.5));
                CHECK(std::abs(M.sparse().row_sum(u) - 1.0) <= 1e-12);
            }
        }
    }
    SUBCASE("existing self-loop is overwritten") {
        const DirectedGraph g(2, {{0, 0}, {0, 1}, {1, 0}});
        const auto M = equal_weight_matrix(lazify(g, 0.25));
        CHECK(M.at(0, 0) == doctest::Approx(0.25));
        CHECK(M.at(0, 1) == doctest::Approx(0.75));
    }
    SUBCASE("alpha out of range") { CHECK_THROWS_AS(lazify(DirectedGraph(1, {}), 1.0), SpecError); }
}

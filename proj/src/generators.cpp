#include "kronmix/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kronmix/errors.hpp"
#include "kronmix/rng.hpp"

namespace kronmix {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 16> names{{
    {Family::Cycle, "cycle"},
    {Family::Path, "path"},
    {Family::Star, "star"},
    {Family::TwoStar, "two-star"},
    {Family::Complete, "complete"},
    {Family::Dumbbell, "dumbbell"},
    {Family::Lollipop, "lollipop"},
    {Family::Bolas, "bolas"},
    {Family::BinaryTree, "binary-tree"},
    {Family::Hypercube, "hypercube"},
    {Family::Grid, "grid-kd"},
    {Family::Torus, "torus-kd"},
    {Family::EulerianRing, "eulerian-ring"},
    {Family::ErdosRenyi, "erdos-renyi"},
    {Family::NewmanWatts, "newman-watts"},
    {Family::Geometric, "geometric"},
}};

using EdgeList = std::vector<Edge>;

void require(bool ok, const std::string& what) {
    if (!ok) throw SpecError(what);
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

void add_clique(EdgeList& es, std::size_t first, std::size_t size) {
    for (std::size_t a = first; a < first + size; ++a)
        for (std::size_t b = a + 1; b < first + size; ++b) es.push_back({a, b});
}

void add_path(EdgeList& es, std::size_t from, std::size_t to_exclusive) {
    for (std::size_t a = from; a + 1 < to_exclusive; ++a) es.push_back({a, a + 1});
}

DirectedGraph lattice(std::size_t side, std::size_t dims, bool wrap) {
    const std::size_t total = ipow(side, dims);
    EdgeList es;
    for (std::size_t node = 0; node < total; ++node) {
        std::size_t stride = 1;
        for (std::size_t d = 0; d < dims; ++d, stride *= side) {
            const std::size_t coord = (node / stride) % side;
            if (coord + 1 < side) es.push_back({node, node + stride});
            else if (wrap && side > 2) es.push_back({node, node - coord * stride});
        }
    }
    return DirectedGraph::undirected(total, es);
}

std::uint64_t family_stream(Family f) { return static_cast<std::uint64_t>(f) + 1; }

}  // namespace

std::string_view family_name(Family family) {
    for (const auto& [f, name] : names)
        if (f == family) return name;
    return "unknown";
}

Family parse_family(std::string_view name) {
    for (const auto& [f, n] : names)
        if (n == name) return f;
    if (name == "grid") return Family::Grid;
    if (name == "torus") return Family::Torus;
    throw SpecError("unknown topology family '" + std::string(name) + "'");
}

std::size_t node_count(const TopologySpec& spec) {
    switch (spec.family) {
        case Family::Hypercube: return ipow(2, spec.k);
        case Family::Grid:
        case Family::Torus: return ipow(spec.n, spec.k);
        default: return spec.n;
    }
}

DirectedGraph generate(const TopologySpec& spec) {
    const std::size_t n = spec.n;
    const std::string fam(family_name(spec.family));
    EdgeList es;
    switch (spec.family) {
        case Family::Cycle: {
            require(n >= (spec.directed ? 1u : 3u), fam + ": n too small");
            for (std::size_t i = 0; i < n; ++i) es.push_back({i, (i + 1) % n});
            return spec.directed ? DirectedGraph(n, es) : DirectedGraph::undirected(n, es);
        }
        case Family::Path: {
            require(n >= 2, fam + ": n must be at least 2");
            add_path(es, 0, n);
            if (!spec.directed) return DirectedGraph::undirected(n, es);
            es.push_back({n - 1, n - 1});
            return DirectedGraph(n, es);
        }
        case Family::Star: {
            require(n >= 2, fam + ": n must be at least 2");
            for (std::size_t i = 1; i < n; ++i) es.push_back({i, 0});
            if (!spec.directed) return DirectedGraph::undirected(n, es);
            es.push_back({0, 0});
            return DirectedGraph(n, es);
        }
        case Family::TwoStar: {
            require(n >= 4, fam + ": n must be at least 4");
            const std::size_t left = (n + 1) / 2;
            for (std::size_t i = 1; i < left; ++i) es.push_back({0, i});
            for (std::size_t i = left + 1; i < n; ++i) es.push_back({left, i});
            es.push_back({0, left});
            return DirectedGraph::undirected(n, es);
        }
        case Family::Complete: {
            require(n >= 2, fam + ": n must be at least 2");
            add_clique(es, 0, n);
            return DirectedGraph::undirected(n, es);
        }
        case Family::Dumbbell: {
            require(n >= 4, fam + ": n must be at least 4");
            const std::size_t left = (n + 1) / 2;
            add_clique(es, 0, left);
            add_clique(es, left, n - left);
            es.push_back({left - 1, left});
            return DirectedGraph::undirected(n, es);
        }
        case Family::Lollipop: {
            const std::size_t tail = spec.bridge.value_or(n / 2);
            require(n >= 3 && tail + 2 <= n, fam + ": need n >= tail + 2");
            const std::size_t clique = n - tail;
            add_clique(es, 0, clique);
            add_path(es, clique - 1, n);
            return DirectedGraph::undirected(n, es);
        }
        case Family::Bolas: {
            const std::size_t inner = spec.bridge.value_or((n + 2) / 3);
            require(n >= inner + 4, fam + ": need n >= bridge + 4");
            const std::size_t left = (n - inner + 1) / 2, right = n - inner - left;
            add_clique(es, 0, left);
            add_clique(es, left + inner, right);
            // left - 1 -> bridge nodes -> left + inner
            add_path(es, left - 1, left + inner + 1);
            return DirectedGraph::undirected(n, es);
        }
        case Family::BinaryTree: {
            require(n >= 1, fam + ": n must be positive");
            for (std::size_t i = 1; i < n; ++i) es.push_back({(i - 1) / 2, i});
            return DirectedGraph::undirected(n, es);
        }
        case Family::Hypercube: {
            require(spec.k >= 1 && spec.k <= 24, fam + ": k must be in [1, 24]");
            const std::size_t total = ipow(2, spec.k);
            for (std::size_t v = 0; v < total; ++v)
                for (std::size_t b = 0; b < spec.k; ++b)
                    if (!(v & (std::size_t{1} << b))) es.push_back({v, v | (std::size_t{1} << b)});
            return DirectedGraph::undirected(total, es);
        }
        case Family::Grid:
        case Family::Torus: {
            require(n >= 2 && spec.k >= 1, fam + ": need side >= 2 and k >= 1");
            require(std::pow(static_cast<double>(n), static_cast<double>(spec.k)) <= 5e7, fam + ": too large");
            return lattice(n, spec.k, spec.family == Family::Torus);
        }
        case Family::EulerianRing: {
            require(n >= 2 && spec.k >= 1 && spec.k < n, fam + ": need 1 <= k < n");
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t s = 1; s <= spec.k; ++s) es.push_back({i, (i + s) % n});
            return DirectedGraph(n, es);
        }
        case Family::ErdosRenyi: {
            require(n >= 1 && spec.p >= 0.0 && spec.p <= 1.0, fam + ": need n >= 1 and p in [0,1]");
            Rng rng = Rng::stream(spec.seed, family_stream(spec.family));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b)
                    if (rng.bernoulli(spec.p)) es.push_back({a, b});
            return DirectedGraph::undirected(n, es);
        }
        case Family::NewmanWatts: {
            require(spec.k >= 1 && n > 2 * spec.k && spec.p >= 0.0 && spec.p <= 1.0,
                    fam + ": need k >= 1, n > 2k and p in [0,1]");
            Rng rng = Rng::stream(spec.seed, family_stream(spec.family));
            EdgeList ring;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t s = 1; s <= spec.k; ++s) ring.push_back({i, (i + s) % n});
            es = ring;
            for (const auto& e : ring) {
                if (!rng.bernoulli(spec.p)) continue;
                std::size_t target = rng.below(n - 1);
                if (target >= e.source) ++target;
                es.push_back({e.source, target});
            }
            return DirectedGraph::undirected(n, es);
        }
        case Family::Geometric: {
            require(n >= 1 && spec.r > 0.0 && spec.r <= std::sqrt(2.0) + 1e-12,
                    fam + ": need n >= 1 and r in (0, sqrt 2]");
            Rng rng = Rng::stream(spec.seed, family_stream(spec.family));
            std::vector<std::pair<double, double>> pts(n);
            for (auto& [x, y] : pts) {
                x = rng.uniform();
                y = rng.uniform();
            }
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b)
                    if (std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second) <= spec.r)
                        es.push_back({a, b});
            return DirectedGraph::undirected(n, es);
        }
    }
    throw SpecError("unhandled family");
}

DirectedGraph lazify(const DirectedGraph& graph, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw SpecError("lazify: alpha must be in [0, 1)");
    std::vector<Edge> es;
    es.reserve(graph.edge_count() + graph.node_count());
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
        const auto nb = graph.out_neighbors(u);
        const auto w = graph.out_weights(u);
        double others = 0.0;
        for (std::size_t k = 0; k < nb.size(); ++k)
            if (nb[k] != u) others += graph.weighted() ? w[k] : 1.0;
        if (others <= 0.0) {
            es.push_back({u, u, 1.0});
            continue;
        }
        if (alpha > 0.0) es.push_back({u, u, alpha});
        for (std::size_t k = 0; k < nb.size(); ++k)
            if (nb[k] != u)
                es.push_back({u, nb[k], (1.0 - alpha) * (graph.weighted() ? w[k] : 1.0) / others});
    }
    return DirectedGraph(graph.node_count(), std::move(es), true, graph.directed());
}

std::size_t weak_component_count(const DirectedGraph& graph) {
    const std::size_t n = graph.node_count();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t count = n;
    for (std::size_t u = 0; u < n; ++u)
        for (auto v : graph.out_neighbors(u)) {
            const std::size_t a = find(u), b = find(v);
            if (a != b) {
                parent[a] = b;
                --count;
            }
        }
    return count;
}

}  // namespace kronmix

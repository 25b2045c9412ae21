#include "kronmix/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "kronmix/errors.hpp"

namespace kronmix {

DirectedGraph::DirectedGraph(std::size_t node_count, std::vector<Edge> edges, bool weighted,
                             bool directed)
    : weighted_(weighted), directed_(directed) {
    for (const auto& e : edges) {
        if (e.source >= node_count || e.target >= node_count)
            throw SpecError("edge (" + std::to_string(e.source) + ", " + std::to_string(e.target) +
                            ") out of range for " + std::to_string(node_count) + " nodes");
        if (weighted && (!std::isfinite(e.weight) || e.weight < 0.0))
            throw SpecError("edge weight must be finite and non-negative");
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    offsets_.assign(node_count + 1, 0);
    targets_.reserve(edges.size());
    weights_.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const Edge& e = edges[k];
        const double w = weighted ? e.weight : 1.0;
        if (k > 0 && edges[k - 1].source == e.source && edges[k - 1].target == e.target) {
            if (weighted) weights_.back() += w;
            continue;
        }
        targets_.push_back(e.target);
        weights_.push_back(w);
        ++offsets_[e.source + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
}

DirectedGraph DirectedGraph::undirected(std::size_t node_count, const std::vector<Edge>& edges,
                                        bool weighted) {
    std::vector<Edge> both;
    both.reserve(2 * edges.size());
    for (const auto& e : edges) {
        both.push_back(e);
        if (e.source != e.target) both.push_back({e.target, e.source, e.weight});
    }
    return DirectedGraph(node_count, std::move(both), weighted, false);
}

bool DirectedGraph::has_edge(std::size_t u, std::size_t v) const {
    const auto nb = out_neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> DirectedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t u = 0; u < node_count(); ++u)
        for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k)
            out.push_back({u, targets_[k], weights_[k]});
    return out;
}

DirectedGraph DirectedGraph::reversed() const {
    auto es = edges();
    for (auto& e : es) std::swap(e.source, e.target);
    return DirectedGraph(node_count(), std::move(es), weighted_, directed_);
}

DirectedGraph DirectedGraph::induced(std::span<const std::size_t> nodes) const {
    constexpr auto absent = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> local(node_count(), absent);
    for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = k;
    std::vector<Edge> es;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto nb = out_neighbors(nodes[k]);
        const auto w = out_weights(nodes[k]);
        for (std::size_t t = 0; t < nb.size(); ++t)
            if (local[nb[t]] != absent) es.push_back({k, local[nb[t]], w[t]});
    }
    return DirectedGraph(nodes.size(), std::move(es), weighted_, directed_);
}

bool DirectedGraph::is_symmetric() const {
    for (std::size_t u = 0; u < node_count(); ++u)
        for (auto v : out_neighbors(u))
            if (!has_edge(v, u)) return false;
    return true;
}

std::vector<std::size_t> SccDecomposition::closed_components() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < count(); ++c)
        if (closed[c]) out.push_back(c);
    return out;
}

namespace {

// Iterative Tarjan; recursion would overflow on long paths in product graphs.
std::vector<std::size_t> tarjan(const DirectedGraph& g, std::size_t& component_count) {
    constexpr auto unvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = g.node_count();
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next neighbor offset)
    std::size_t counter = 0;
    component_count = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [u, next] = call.back();
            const auto nb = g.out_neighbors(u);
            if (next < nb.size()) {
                const std::size_t v = nb[next++];
                if (index[v] == unvisited) {
                    index[v] = low[v] = counter++;
                    stack.push_back(v);
                    on_stack[v] = true;
                    call.push_back({v, 0});
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
                continue;
            }
            const std::size_t done = u;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = component_count;
                } while (w != done);
                ++component_count;
            }
        }
    }
    return comp;
}

std::size_t period_of(const DirectedGraph& g, std::span<const std::size_t> nodes,
                      const std::vector<std::size_t>& comp_of, std::size_t comp) {
    constexpr auto unseen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> level(g.node_count(), unseen);
    std::queue<std::size_t> q;
    level[nodes[0]] = 0;
    q.push(nodes[0]);
    std::size_t d = 0;
    while (!q.empty()) {
        const std::size_t u = q.front();
        q.pop();
        for (auto v : g.out_neighbors(u)) {
            if (comp_of[v] != comp) continue;
            if (level[v] == unseen) {
                level[v] = level[u] + 1;
                q.push(v);
            } else {
                const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
                d = std::gcd(d, static_cast<std::size_t>(diff < 0 ? -diff : diff));
            }
        }
    }
    return d == 0 ? 1 : d;
}

}  // namespace

SccDecomposition scc_decompose(const DirectedGraph& graph) {
    SccDecomposition out;
    std::size_t count = 0;
    out.component_of = tarjan(graph, count);
    out.components.assign(count, {});
    for (std::size_t u = 0; u < graph.node_count(); ++u)
        out.components[out.component_of[u]].push_back(u);
    out.closed.assign(count, true);
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
        const std::size_t cu = out.component_of[u];
        for (auto v : graph.out_neighbors(u)) {
            const std::size_t cv = out.component_of[v];
            if (cu != cv) {
                out.condensation_edges.push_back({cu, cv});
                out.closed[cu] = false;
            }
        }
    }
    std::sort(out.condensation_edges.begin(), out.condensation_edges.end());
    out.condensation_edges.erase(
        std::unique(out.condensation_edges.begin(), out.condensation_edges.end()),
        out.condensation_edges.end());
    out.period.resize(count);
    out.trivial.resize(count);
    for (std::size_t c = 0; c < count; ++c) {
        const auto& nodes = out.components[c];
        out.trivial[c] = nodes.size() == 1 && !graph.has_self_loop(nodes[0]);
        out.period[c] = out.trivial[c] ? 1 : period_of(graph, nodes, out.component_of, c);
    }
    return out;
}

std::size_t scc_period(const DirectedGraph& graph, std::span<const std::size_t> component) {
    if (component.empty()) throw StructuralError("empty component");
    std::vector<std::size_t> tag(graph.node_count(), 1);
    for (auto u : component) {
        if (u >= graph.node_count()) throw StructuralError("component node out of range");
        tag[u] = 0;
    }
    if (component.size() == 1 && !graph.has_self_loop(component[0])) return 1;
    // Strong connectivity: every member reaches and is reached from component[0]
    // using intra-component edges only.
    const auto sub = graph.induced(component);
    const std::size_t root = 0;
    for (const auto& g : {sub, sub.reversed()}) {
        const std::size_t roots[] = {root};
        const auto seen = reachable_from(g, roots);
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw StructuralError("node set is not strongly connected");
    }
    return period_of(graph, component, tag, 0);
}

DirectedGraph condensation(const SccDecomposition& decomp) {
    std::vector<Edge> es;
    es.reserve(decomp.condensation_edges.size());
    for (auto [a, b] : decomp.condensation_edges) es.push_back({a, b, 1.0});
    return DirectedGraph(decomp.count(), std::move(es));
}

std::vector<bool> reachable_from(const DirectedGraph& graph, std::span<const std::size_t> sources) {
    std::vector<bool> seen(graph.node_count(), false);
    std::vector<std::size_t> todo;
    for (auto s : sources)
        if (!seen[s]) {
            seen[s] = true;
            todo.push_back(s);
        }
    while (!todo.empty()) {
        const std::size_t u = todo.back();
        todo.pop_back();
        for (auto v : graph.out_neighbors(u))
            if (!seen[v]) {
                seen[v] = true;
                todo.push_back(v);
            }
    }
    return seen;
}

}  // namespace kronmix

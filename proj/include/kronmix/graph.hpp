#ifndef KRONMIX_GRAPH_HPP
#define KRONMIX_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace kronmix {

struct Edge {
    std::size_t source;
    std::size_t target;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable sparse directed graph in CSR layout.
///
/// Edges are stored in random-walk orientation: an edge i -> j means that
/// node i puts weight on node j (row i, column j of the associated matrix).
/// Undirected inputs are stored as symmetric pairs of directed edges.
/// Duplicate (source, target) pairs are merged; weights are summed when the
/// graph is weighted.
class DirectedGraph {
public:
    DirectedGraph() = default;

    /// Throws SpecError for out-of-range indices or negative/non-finite weights.
    DirectedGraph(std::size_t node_count, std::vector<Edge> edges, bool weighted = false,
                  bool directed = true);

    /// Symmetrizes every {u, v} pair.
    static DirectedGraph undirected(std::size_t node_count, const std::vector<Edge>& edges,
                                    bool weighted = false);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size(); }
    bool weighted() const noexcept { return weighted_; }
    bool directed() const noexcept { return directed_; }

    std::span<const std::size_t> out_neighbors(std::size_t u) const {
        return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::span<const double> out_weights(std::size_t u) const {
        return {weights_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::size_t out_degree(std::size_t u) const { return offsets_[u + 1] - offsets_[u]; }
    bool has_edge(std::size_t u, std::size_t v) const;
    bool has_self_loop(std::size_t u) const { return has_edge(u, u); }

    std::vector<Edge> edges() const;
    DirectedGraph reversed() const;

    /// Subgraph induced on `nodes`; node k of the result is nodes[k].
    DirectedGraph induced(std::span<const std::size_t> nodes) const;

    /// Undirected graphs with symmetric storage, checked edge by edge.
    bool is_symmetric() const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> targets_;
    std::vector<double> weights_;
    bool weighted_ = false;
    bool directed_ = true;
};

/// Strongly connected components of a graph.
///
/// Components are numbered in the order Tarjan's algorithm completes them,
/// which is a reverse topological order of the condensation: every
/// condensation edge c -> d has d < c, so component 0 is always closed.
/// A component is closed when no edge leaves it (in walk orientation this is
/// a component with no incoming influence from outside).
struct SccDecomposition {
    std::vector<std::size_t> component_of;
    std::vector<std::vector<std::size_t>> components;   // each sorted ascending
    std::vector<std::pair<std::size_t, std::size_t>> condensation_edges;  // sorted, unique
    std::vector<bool> closed;
    std::vector<std::size_t> period;
    /// Single node without a self-loop: period is reported as 1 by convention.
    std::vector<bool> trivial;

    std::size_t count() const noexcept { return components.size(); }
    std::vector<std::size_t> closed_components() const;
};

SccDecomposition scc_decompose(const DirectedGraph& graph);

/// gcd of all cycle lengths inside a strongly connected node set, from BFS
/// levels: gcd over intra-component edges u -> v of level(u) + 1 - level(v).
/// Throws StructuralError when `component` is not strongly connected.
/// A single loop-free node yields 1.
std::size_t scc_period(const DirectedGraph& graph, std::span<const std::size_t> component);

/// One node per component, deduplicated inter-component edges.
DirectedGraph condensation(const SccDecomposition& decomp);

/// Nodes reachable from `sources` (including the sources).
std::vector<bool> reachable_from(const DirectedGraph& graph, std::span<const std::size_t> sources);

}  // namespace kronmix

#endif  // KRONMIX_GRAPH_HPP

#ifndef KRONMIX_GENERATORS_HPP
#define KRONMIX_GENERATORS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "kronmix/graph.hpp"

namespace kronmix {

enum class Family {
    Cycle,
    Path,
    Star,
    TwoStar,
    Complete,
    Dumbbell,
    Lollipop,
    Bolas,
    BinaryTree,
    Hypercube,
    Grid,
    Torus,
    EulerianRing,
    ErdosRenyi,
    NewmanWatts,
    Geometric,
};

std::string_view family_name(Family family);
/// Accepts the names printed by family_name ("cycle", "two-star", "grid-kd", ...).
Family parse_family(std::string_view name);

/// Parameters of one topology. Which fields matter depends on the family:
///
///   cycle, path, star, two-star, complete, binary-tree   n
///   dumbbell                                             n (two cliques of n/2)
///   lollipop, bolas                                      n, bridge (path length)
///   hypercube                                            k (dimension, 2^k nodes)
///   grid-kd, torus-kd                                    n (side), k (dimension)
///   eulerian-ring                                        n, k (out-degree)
///   erdos-renyi                                          n, p
///   newman-watts                                         n, k (neighbours per side), p
///   geometric                                            n, r (unit square)
///
/// `directed` selects the directed variants of cycle, path and star. Directed
/// paths give the terminal node a self-loop and directed stars point leaves
/// at a center that carries a self-loop, so every node has an out-edge.
struct TopologySpec {
    Family family = Family::Cycle;
    std::size_t n = 0;
    std::size_t k = 0;
    double p = 0.0;
    double r = 0.0;
    std::optional<std::size_t> bridge;
    bool directed = false;
    std::uint64_t seed = 0;
};

/// Deterministic for a fixed spec. Throws SpecError on invalid parameters.
DirectedGraph generate(const TopologySpec& spec);

/// Number of nodes the spec produces.
std::size_t node_count(const TopologySpec& spec);

/// Puts a self-loop of weight alpha on every node (replacing any existing
/// one) and shares 1 - alpha equally over the remaining out-edges. Nodes whose
/// only out-edge was a self-loop keep weight 1 on it. The result is weighted,
/// so equal_weight_matrix reproduces these weights.
DirectedGraph lazify(const DirectedGraph& graph, double alpha);

/// Connected components of the underlying undirected graph.
std::size_t weak_component_count(const DirectedGraph& graph);

}  // namespace kronmix

#endif  // KRONMIX_GENERATORS_HPP

#ifndef KRONMIX_TESTS_ORACLES_HPP
#define KRONMIX_TESTS_ORACLES_HPP

// Dense, deliberately naive reference implementations. None of these call
// the library's algorithms; they only read its data structures.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kronmix/belief.hpp"
#include "kronmix/graph.hpp"
#include "kronmix/rng.hpp"
#include "kronmix/stochastic.hpp"

namespace oracle {

using Dense = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Dense dense(const kronmix::StochasticMatrix& m);
Dense adjacency(const kronmix::DirectedGraph& g);

/// label[u] = smallest node mutually reachable with u (transitive closure).
std::vector<std::size_t> scc_labels(const kronmix::DirectedGraph& g);

/// DFS back-edge test.
bool has_cycle(const kronmix::DirectedGraph& g);

/// gcd of all simple cycle lengths inside `nodes` (exhaustive; small graphs only).
std::size_t period_by_cycles(const kronmix::DirectedGraph& g, const std::vector<std::size_t>& nodes);

/// gcd of k <= |nodes| with a positive diagonal entry of the k-th boolean power.
std::size_t period_by_powers(const kronmix::DirectedGraph& g, const std::vector<std::size_t>& nodes);

/// Left null vector of P - I, normalized to sum 1 (dense LU).
Vec stationary(const Dense& P);

/// Second largest eigenvalue modulus (dense eigen-solve).
double lambda2(const Dense& P);

/// min k with max_x TV(P^k(x,.), pi) <= eps, by dense powers.
std::size_t mixing_time(const Dense& P, double eps, std::size_t cap = 1'000'000);

/// Exact max over start pairs of E[first meeting time] for two independent
/// walks, from the absorbing chain on ordered pairs.
double coupling_expectation(const Dense& P, std::size_t* worst_x = nullptr, std::size_t* worst_y = nullptr);
double coupling_expectation_from(const Dense& P, std::size_t x, std::size_t y);

/// Materialized stacked system matrix built straight from its block formula.
Dense system_matrix(const kronmix::BeliefSystem& s);

/// Random digraph in which every node has at least one out-edge.
kronmix::DirectedGraph random_digraph(std::size_t n, double p, kronmix::Rng& rng);

/// Strongly connected digraph whose cycles all have lengths divisible by d.
kronmix::DirectedGraph layered_cycle(std::size_t n, std::size_t d, double extra, kronmix::Rng& rng);

/// Dense ergodic chain with random weights and positive diagonal.
kronmix::StochasticMatrix random_ergodic(std::size_t n, double density, kronmix::Rng& rng);

/// Random belief system for the convergence and limit suites.
kronmix::BeliefSystem random_system(std::size_t max_n, std::size_t max_m, kronmix::Rng& rng);

}  // namespace oracle

#endif

#ifndef KRONMIX_LIMITS_HPP
#define KRONMIX_LIMITS_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kronmix/belief.hpp"
#include "kronmix/graph.hpp"
#include "kronmix/stochastic.hpp"
#include "kronmix/transient.hpp"

namespace kronmix {

/// Split of a chain into transient and recurrent (closed-SCC) states.
struct TransientBlock {
    std::vector<std::size_t> transient;  // global indices, ascending
    std::vector<std::size_t> recurrent;  // global indices, ascending
    SparseMatrix Z;                      // transient -> transient
    SparseMatrix R;                      // transient -> recurrent
    std::shared_ptr<const TransientSolver> fundamental;  // N = (I - Z)^-1
    /// absorb(t, r) = probability that a walk from transient[t] first enters
    /// the recurrent set at recurrent[r]; row-major |transient| x |recurrent|.
    std::vector<double> absorb;

    double absorb_at(std::size_t t, std::size_t r) const { return absorb[t * recurrent.size() + r]; }
    /// h = N 1, expected steps to reach the recurrent set.
    std::vector<double> expected_steps() const;
};

/// Builds Z, R and N R from one factorization of I - Z. Throws
/// StructuralError when the transient set is empty or I - Z is singular.
TransientBlock absorbing_probabilities(const StochasticMatrix& matrix, const SccDecomposition& decomp);

struct ClosedLimit {
    std::size_t component = 0;
    std::vector<std::size_t> agents;   // factor node sets; empty for anchors
    std::vector<std::size_t> topics;
    Distribution pi_agents, pi_topics;
    double value = 0.0;
};

/// Common limit of the current-belief nodes of a closed aperiodic SCC of the
/// system graph: pi_S' x0^S with pi_S = pi_{A_S} (x) pi_{C_S}. Anchor nodes
/// (initial beliefs) are their own closed components and keep x0.
/// Throws NotErgodic for a periodic component, StructuralError when the
/// component does not factor as A_S x C_S or is not closed.
ClosedLimit closed_limit(const BeliefSystem& system, const SccDecomposition& decomp,
                         std::size_t component);

/// Fills limits for nodes of open components, visiting components in reverse
/// topological order of the condensation. `limits` must already hold values
/// for every closed-component node (other entries are ignored and
/// overwritten). Each open component S solves (I - Z_S) x_S = R_S x_out.
/// Throws OrderingError when a downstream value is missing.
void open_limit(const StochasticMatrix& matrix, const SccDecomposition& decomp,
                std::vector<std::optional<double>>& limits);

struct LimitReport {
    enum class Method { Structural, FixedPoint, Simulation };
    Method method = Method::Structural;
    std::vector<double> values;          // length 2nm stacked, or nm for fixed point
    std::vector<ClosedLimit> closed;     // structural only

    /// n x m current-belief block.
    std::vector<double> beliefs(const BeliefSystem& system) const;
};

/// Structural limit of every node of the system graph. Throws
/// NotErgodic when some closed component is periodic (system does not converge).
LimitReport structural_limit(const BeliefSystem& system);

struct FixedPointOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 1'000'000;
};

/// Solves X = Lambda A X C' + (I - Lambda) X0. Without oblivious agents the
/// map is a contraction and the unique solution is obtained by a sparse solve
/// of (I - (Lambda A) (x) C) vec X = vec((I - Lambda) X0); otherwise X is
/// iterated from X0 until the update is below tolerance.
/// Throws NoUniqueFixedPoint when the iteration stalls (periodic oblivious part).
LimitReport stubborn_limit(const BeliefSystem& system, const FixedPointOptions& options = {});

struct SocialPower {
    std::vector<std::size_t> order;   // nodes by decreasing weight
    std::vector<double> weights;      // sorted descending
    std::vector<double> cumulative;   // cumulative[k] = sum of the k+1 largest weights
};

/// Stationary weights of an ergodic chain, ranked. Throws NotErgodic.
SocialPower social_power(const StochasticMatrix& matrix);

/// Share of total weight held by the top `fraction` of nodes (rounded up).
double top_share(const SocialPower& power, double fraction);

}  // namespace kronmix

#endif  // KRONMIX_LIMITS_HPP

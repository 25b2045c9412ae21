#ifndef KRONMIX_MIXING_HPP
#define KRONMIX_MIXING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kronmix/belief.hpp"
#include "kronmix/graph.hpp"
#include "kronmix/stochastic.hpp"

namespace kronmix {

/// Which starting states the worst-case distance is taken over.
struct StartPolicy {
    std::size_t exact_limit = 2000;  // all starts when dimension <= exact_limit
    std::size_t samples = 64;        // otherwise this many uniformly drawn starts
    std::uint64_t seed = 0;
    std::vector<std::size_t> explicit_starts;  // overrides both when non-empty

    std::vector<std::size_t> starts(std::size_t dimension) const;
};

struct MixingTime {
    std::size_t t_mix = 0;
    std::size_t starts_examined = 0;
    bool exact = false;            // every start examined
    std::size_t worst_start = 0;
    std::vector<double> d_curve;   // d(0..t_mix) when requested
};

struct MixingOptions {
    double epsilon = 0.25;
    StartPolicy starts;
    std::size_t max_steps = 10'000'000;
    bool record_curve = false;
};

/// t_mix(eps) = min{k : max_x TV(P^k(x, .), pi) <= eps}. Each start is run
/// until its own distance drops below eps (the per-start distance to pi is
/// non-increasing), so t_mix is the largest per-start time.
/// Throws FailedToConverge when max_steps is reached.
MixingTime measure_mixing_time(const TransitionOperator& op, const Distribution& pi,
                               const MixingOptions& options = {});

/// Checks ergodicity (NotErgodic) and computes pi first.
MixingTime measure_mixing_time(const StochasticMatrix& matrix, const MixingOptions& options = {});

/// d(k) for k = 0..steps, maximised over `starts`.
std::vector<double> distance_curve(const TransitionOperator& op, const Distribution& pi,
                                   std::span<const std::size_t> starts, std::size_t steps);

/// Per-start mixing times (used to pick extremal starts of factor chains).
std::vector<std::size_t> per_start_mixing_times(const TransitionOperator& op, const Distribution& pi,
                                                std::span<const std::size_t> starts, double epsilon,
                                                std::size_t max_steps = 10'000'000);

struct EigenBounds {
    double lambda2 = 0.0;  // |second eigenvalue|
    double lower = 0.0;    // lambda2 / (2 (1 - lambda2)) * ln(1 / (2 eps))
    double upper = 0.0;    // (ln n + ln(1 / eps)) / (1 - lambda2)
    std::size_t iterations = 0;
};

struct EigenOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 2'000'000;
    std::uint64_t seed = 0;
};

/// |lambda_2| by two-vector subspace iteration on the operator deflated with
/// the known leading pair (pi, 1), then both sides of the spectral bound.
/// Throws FailedToConverge when the estimate stalls.
EigenBounds eigen_bounds(const TransitionOperator& op, const Distribution& pi, double epsilon,
                         const EigenOptions& options = {});
EigenBounds eigen_bounds(const StochasticMatrix& matrix, double epsilon, const EigenOptions& options = {});

/// Spectral bound pair for a known |lambda_2|.
EigenBounds spectral_bounds(double lambda2, std::size_t n, double epsilon);

struct CouplingOptions {
    std::size_t trials = 1000;
    std::size_t step_cap = 10'000'000;
    std::uint64_t seed = 0;
    std::size_t random_pairs = 32;
    std::size_t all_pairs_limit = 40;  // every distinct pair when n <= this
};

struct CouplingEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;   // trials that coupled
    std::size_t capped = 0;   // trials that hit step_cap
    std::size_t start_x = 0, start_y = 0;
};

/// Monte-Carlo E[K], K = first time two independent walks from (x, y) meet.
/// Throws AllTrialsCapped when no trial couples.
CouplingEstimate coupling_time_from(const TransitionOperator& op, std::size_t x, std::size_t y,
                                    const CouplingOptions& options = {});

/// Worst start pair: a pilot of trials/8 runs ranks the candidate pairs
/// (all distinct pairs when n <= all_pairs_limit, plus random_pairs random
/// ones), then a fresh batch of `trials` runs from the worst pair is reported.
CouplingEstimate estimate_coupling_time(const TransitionOperator& op, const CouplingOptions& options = {});

struct AbsorbingTimes {
    std::vector<double> per_node;  // 0 on closed components
    double H = 0.0;                // max over nodes
    /// Per-component exit times summed along the longest path of the condensation.
    double path_sum = 0.0;
};

/// Solves (I - Z) h = 1 on the transient block. Throws StructuralError when
/// no component is closed or I - Z is singular.
AbsorbingTimes expected_absorbing_time(const StochasticMatrix& matrix, const SccDecomposition& decomp);

/// 32 (max{L_T, L_G} + max{H_T, H_G}) ln(1/eps).
double theorem_bound(double L_G, double L_T, double H_G, double H_T, double epsilon);

/// 4 (L + H) ln(1/eps).
double lemma_bound(double L, double H, double epsilon);

/// Coupling and absorbing times of one factor chain: L is the worst coupling
/// estimate over its closed components, H its absorbing time.
struct ChainTimes {
    CouplingEstimate coupling;  // mean 0 when every closed component is a single node
    double H = 0.0;
};
ChainTimes chain_times(const StochasticMatrix& matrix, const CouplingOptions& options = {});

/// Factor times for a belief system: the oblivious agents' chain and the
/// constraint chain. Without oblivious agents the agent side is zero.
struct SystemTimes {
    ChainTimes agents, topics;
    double bound(double epsilon) const {
        return theorem_bound(agents.coupling.mean, topics.coupling.mean, agents.H, topics.H, epsilon);
    }
};
SystemTimes system_times(const BeliefSystem& system, const CouplingOptions& options = {});

/// ||x_k - x_inf||_inf for k = 0..steps, simulated from the system's x0.
std::vector<double> distance_to_limit(const BeliefSystem& system, std::span<const double> limit_beliefs,
                                      std::size_t steps);

}  // namespace kronmix

#endif  // KRONMIX_MIXING_HPP

#ifndef KRONMIX_BELIEF_HPP
#define KRONMIX_BELIEF_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kronmix/graph.hpp"
#include "kronmix/stochastic.hpp"

namespace kronmix {

/// Agents' beliefs on several logically coupled statements.
///
/// Per step every agent first mixes its own statements through C, then
/// averages those mixed values over its neighbours through A, then pulls the
/// result back towards its initial beliefs with weight 1 - lambda_i:
///
///   xhat_i = C x_i,   xbar(i,u) = sum_j A(i,j) xhat(j,u),
///   x'(i,u) = lambda_i xbar(i,u) + (1 - lambda_i) x0(i,u).
///
/// Stacked over the 2nm states [current beliefs; initial beliefs] with pair
/// index (i,u) -> i*m + u this is x' = P x with
///
///   P = [ (Lambda A) (x) C   (I - Lambda) (x) I ]
///       [        0                  I          ].
class BeliefSystem {
public:
    /// x0 is n x m row-major. Throws DimensionMismatch or SpecError.
    BeliefSystem(StochasticMatrix A, StochasticMatrix C, std::vector<double> lambda,
                 std::vector<double> x0);

    std::size_t agents() const noexcept { return A_.dimension(); }
    std::size_t topics() const noexcept { return C_.dimension(); }
    std::size_t state_dimension() const noexcept { return 2 * agents() * topics(); }

    const StochasticMatrix& social() const noexcept { return A_; }
    const StochasticMatrix& constraints() const noexcept { return C_; }
    std::span<const double> lambda() const noexcept { return lambda_; }
    std::span<const double> initial() const noexcept { return x0_; }

    /// Materialized 2nm x 2nm P. Throws TooLarge above `cap` nonzeros.
    StochasticMatrix system_matrix(std::size_t cap = 10'000'000) const;

    /// Initial stacked state [x0; x0].
    std::vector<double> initial_state() const;

private:
    StochasticMatrix A_, C_;
    std::vector<double> lambda_, x0_;
};

inline BeliefSystem assemble(StochasticMatrix A, StochasticMatrix C, std::vector<double> lambda,
                             std::vector<double> x0) {
    return BeliefSystem(std::move(A), std::move(C), std::move(lambda), std::move(x0));
}

struct BeliefState {
    std::size_t k = 0;
    std::vector<double> x;  // length 2nm; the lower nm entries are the anchors

    static BeliefState initial(const BeliefSystem& system) { return {0, system.initial_state()}; }
};

/// One synchronous update computed blockwise; anchors are left untouched.
void step(const BeliefSystem& system, BeliefState& state);

/// Agents with lambda = 1 whose influence never reaches a stubborn agent:
/// the largest lambda = 1 set closed under A's out-neighbourhoods.
std::vector<bool> oblivious_agents(const BeliefSystem& system);

struct ConvergenceWitness {
    enum class Source { ObliviousAgents, Constraints };
    Source source;
    std::vector<std::size_t> nodes;  // agent indices or statement indices
    std::size_t period;
};

struct ConvergenceVerdict {
    bool converges = true;
    std::vector<ConvergenceWitness> witnesses;  // every periodic closed component found
    std::vector<bool> oblivious;
};

/// Converges iff every closed SCC of the oblivious agents' graph is aperiodic
/// and, when there is at least one oblivious agent, every closed SCC of the
/// constraint graph is aperiodic too.
ConvergenceVerdict converges(const BeliefSystem& system);

struct SimulationOptions {
    double stop_delta = 1e-10;
    std::size_t max_iterations = 1'000'000;
    std::size_t oscillation_window = 64;
    std::size_t record_every = 0;  // 0: no trajectory
};

struct SimulationResult {
    BeliefState final_state;
    std::size_t iterations = 0;
    bool reached_tolerance = false;
    double last_delta = 0.0;
    std::vector<std::vector<double>> trajectory;  // current-belief blocks (nm each)
};

/// Iterates step until ||x_{k+1} - x_k||_inf <= stop_delta. Hitting
/// max_iterations while the step size has not decreased over the last
/// oscillation_window iterations throws NonConvergent; otherwise the result
/// is returned with reached_tolerance = false.
SimulationResult simulate(const BeliefSystem& system, const SimulationOptions& options = {});

/// Current-belief block of a stacked state, n x m row-major.
std::vector<double> current_beliefs(const BeliefSystem& system, std::span<const double> state);

}  // namespace kronmix

#endif  // KRONMIX_BELIEF_HPP

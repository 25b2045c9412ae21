#include "kronmix/belief.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "kronmix/errors.hpp"

namespace kronmix {

BeliefSystem::BeliefSystem(StochasticMatrix A, StochasticMatrix C, std::vector<double> lambda,
                           std::vector<double> x0)
    : A_(std::move(A)), C_(std::move(C)), lambda_(std::move(lambda)), x0_(std::move(x0)) {
    const std::size_t n = A_.dimension(), m = C_.dimension();
    if (n == 0 || m == 0) throw DimensionMismatch("belief system needs at least one agent and topic");
    if (lambda_.size() != n)
        throw DimensionMismatch("lambda has " + std::to_string(lambda_.size()) + " entries, expected " +
                                std::to_string(n));
    if (x0_.size() != n * m)
        throw DimensionMismatch("x0 has " + std::to_string(x0_.size()) + " entries, expected " +
                                std::to_string(n * m));
    for (double l : lambda_)
        if (!(l >= 0.0 && l <= 1.0)) throw SpecError("lambda entries must lie in [0, 1]");
    for (double v : x0_)
        if (!(v >= 0.0 && v <= 1.0)) throw SpecError("initial beliefs must lie in [0, 1]");
}

StochasticMatrix BeliefSystem::system_matrix(std::size_t cap) const {
    const std::size_t n = agents(), m = topics(), nm = n * m;
    const std::size_t nnz = A_.sparse().nonzeros() * C_.sparse().nonzeros() + 2 * nm;
    if (nnz > cap) throw TooLarge("system matrix has " + std::to_string(nnz) + " nonzeros");
    std::vector<Triplet> t;
    t.reserve(nnz);
    for (const auto& a : A_.sparse().triplets()) {
        const double w = lambda_[a.row] * a.value;
        if (w == 0.0) continue;
        for (const auto& c : C_.sparse().triplets())
            t.push_back({a.row * m + c.row, a.col * m + c.col, w * c.value});
    }
    for (std::size_t s = 0; s < nm; ++s) {
        const double stubborn = 1.0 - lambda_[s / m];
        if (stubborn > 0.0) t.push_back({s, nm + s, stubborn});
        t.push_back({nm + s, nm + s, 1.0});
    }
    return StochasticMatrix(2 * nm, std::move(t));
}

std::vector<double> BeliefSystem::initial_state() const {
    std::vector<double> x(2 * x0_.size());
    std::copy(x0_.begin(), x0_.end(), x.begin());
    std::copy(x0_.begin(), x0_.end(), x.begin() + static_cast<std::ptrdiff_t>(x0_.size()));
    return x;
}

void step(const BeliefSystem& system, BeliefState& state) {
    const std::size_t n = system.agents(), m = system.topics(), nm = n * m;
    if (state.x.size() != 2 * nm) throw DimensionMismatch("state length must be 2nm");
    thread_local std::vector<double> mixed;
    mixed.assign(nm, 0.0);
    const auto& C = system.constraints().sparse();
    const auto& A = system.social().sparse();
    // Aggregation by logic constraints: xhat(i,u) = sum_v C(u,v) x(i,v).
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = state.x.data() + i * m;
        double* out = mixed.data() + i * m;
        for (std::size_t u = 0; u < m; ++u) {
            const auto cols = C.row_columns(u);
            const auto vals = C.row_values(u);
            double s = 0.0;
            for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * xi[cols[k]];
            out[u] = s;
        }
    }
    // Social aggregation and pull towards the anchors.
    const auto lambda = system.lambda();
    const double* anchors = state.x.data() + nm;
    for (std::size_t i = 0; i < n; ++i) {
        double* xi = state.x.data() + i * m;
        std::fill(xi, xi + m, 0.0);
        const auto cols = A.row_columns(i);
        const auto vals = A.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const double* src = mixed.data() + cols[k] * m;
            for (std::size_t u = 0; u < m; ++u) xi[u] += vals[k] * src[u];
        }
        const double l = lambda[i];
        if (l != 1.0)
            for (std::size_t u = 0; u < m; ++u) xi[u] = l * xi[u] + (1.0 - l) * anchors[i * m + u];
    }
    ++state.k;
}

std::vector<bool> oblivious_agents(const BeliefSystem& system) {
    const std::size_t n = system.agents();
    const auto lambda = system.lambda();
    const auto& A = system.social().sparse();
    std::vector<bool> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = lambda[i] == 1.0;
    // Peel agents that listen to someone outside the set until nothing changes.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in[i]) continue;
            for (auto j : A.row_columns(i))
                if (!in[j]) {
                    in[i] = false;
                    changed = true;
                    break;
                }
        }
    }
    return in;
}

ConvergenceVerdict converges(const BeliefSystem& system) {
    ConvergenceVerdict verdict;
    verdict.oblivious = oblivious_agents(system);
    std::vector<std::size_t> obl;
    for (std::size_t i = 0; i < verdict.oblivious.size(); ++i)
        if (verdict.oblivious[i]) obl.push_back(i);
    if (obl.empty()) return verdict;

    const auto social = system.social().graph().induced(obl);
    const auto ds = scc_decompose(social);
    for (auto c : ds.closed_components())
        if (ds.period[c] > 1) {
            ConvergenceWitness w{ConvergenceWitness::Source::ObliviousAgents, {}, ds.period[c]};
            for (auto local : ds.components[c]) w.nodes.push_back(obl[local]);
            verdict.witnesses.push_back(std::move(w));
        }
    const auto dc = scc_decompose(system.constraints().graph());
    for (auto c : dc.closed_components())
        if (dc.period[c] > 1)
            verdict.witnesses.push_back(
                {ConvergenceWitness::Source::Constraints, dc.components[c], dc.period[c]});
    verdict.converges = verdict.witnesses.empty();
    return verdict;
}

SimulationResult simulate(const BeliefSystem& system, const SimulationOptions& options) {
    SimulationResult result;
    result.final_state = BeliefState::initial(system);
    auto& state = result.final_state;
    const std::size_t nm = system.agents() * system.topics();
    std::vector<double> previous(nm);
    std::deque<double> recent;
    const std::size_t window = std::max<std::size_t>(options.oscillation_window, 1);

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        std::copy(state.x.begin(), state.x.begin() + static_cast<std::ptrdiff_t>(nm), previous.begin());
        step(system, state);
        double delta = 0.0;
        for (std::size_t s = 0; s < nm; ++s) delta = std::max(delta, std::abs(state.x[s] - previous[s]));
        result.iterations = state.k;
        result.last_delta = delta;
        if (options.record_every && state.k % options.record_every == 0)
            result.trajectory.emplace_back(state.x.begin(), state.x.begin() + static_cast<std::ptrdiff_t>(nm));
        if (delta <= options.stop_delta) {
            result.reached_tolerance = true;
            return result;
        }
        recent.push_back(delta);
        if (recent.size() > window + 1) recent.pop_front();
    }
    if (recent.size() == window + 1 && recent.back() >= recent.front() * (1.0 - 1e-9))
        throw NonConvergent("step size " + std::to_string(recent.back()) + " did not decrease over the last " +
                            std::to_string(window) + " iterations");
    return result;
}

std::vector<double> current_beliefs(const BeliefSystem& system, std::span<const double> state) {
    const std::size_t nm = system.agents() * system.topics();
    if (state.size() != 2 * nm) throw DimensionMismatch("state length must be 2nm");
    return {state.begin(), state.begin() + static_cast<std::ptrdiff_t>(nm)};
}

}  // namespace kronmix

#include "kronmix/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "kronmix/errors.hpp"
#include "kronmix/kron.hpp"

namespace kronmix {

std::vector<double> TransientBlock::expected_steps() const {
    const std::vector<double> ones(transient.size(), 1.0);
    return fundamental->solve(ones);
}

TransientBlock absorbing_probabilities(const StochasticMatrix& matrix, const SccDecomposition& decomp) {
    TransientBlock block;
    for (std::size_t u = 0; u < matrix.dimension(); ++u)
        (decomp.closed[decomp.component_of[u]] ? block.recurrent : block.transient).push_back(u);
    if (block.transient.empty()) throw StructuralError("no transient states");
    block.Z = matrix.sparse().submatrix(block.transient, block.transient);
    block.R = matrix.sparse().submatrix(block.transient, block.recurrent);
    block.fundamental = std::make_shared<TransientSolver>(block.Z);

    const std::size_t T = block.transient.size(), Rn = block.recurrent.size();
    block.absorb.assign(T * Rn, 0.0);
    // Column r of N R: solve (I - Z) y = R e_r.
    std::vector<std::vector<double>> columns(Rn, std::vector<double>(T, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        const auto cols = block.R.row_columns(t);
        const auto vals = block.R.row_values(t);
        for (std::size_t k = 0; k < cols.size(); ++k) columns[cols[k]][t] = vals[k];
    }
    for (std::size_t r = 0; r < Rn; ++r) {
        if (std::all_of(columns[r].begin(), columns[r].end(), [](double v) { return v == 0.0; })) continue;
        const auto y = block.fundamental->solve(columns[r]);
        for (std::size_t t = 0; t < T; ++t) block.absorb[t * Rn + r] = std::max(0.0, y[t]);
    }
    return block;
}

ClosedLimit closed_limit(const BeliefSystem& system, const SccDecomposition& decomp,
                         std::size_t component) {
    const std::size_t m = system.topics(), nm = system.agents() * m;
    if (component >= decomp.count()) throw StructuralError("component index out of range");
    if (!decomp.closed[component]) throw StructuralError("component " + std::to_string(component) + " is open");
    if (decomp.period[component] > 1)
        throw NotErgodic("closed component " + std::to_string(component) + " has period " +
                         std::to_string(decomp.period[component]));
    const auto& nodes = decomp.components[component];
    ClosedLimit out;
    out.component = component;
    const auto x0 = system.initial();
    if (nodes.size() == 1 && nodes[0] >= nm) {
        out.value = x0[nodes[0] - nm];
        return out;
    }
    for (auto s : nodes) {
        if (s >= nm) throw StructuralError("closed component mixes anchors and current beliefs");
        out.agents.push_back(s / m);
        out.topics.push_back(s % m);
    }
    for (auto* v : {&out.agents, &out.topics}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    if (out.agents.size() * out.topics.size() != nodes.size())
        throw StructuralError("closed component does not factor as agents x topics");

    out.pi_agents = stationary(system.social().restricted(out.agents));
    out.pi_topics = stationary(system.constraints().restricted(out.topics));
    double value = 0.0;
    for (std::size_t a = 0; a < out.agents.size(); ++a)
        for (std::size_t t = 0; t < out.topics.size(); ++t)
            value += out.pi_agents[a] * out.pi_topics[t] * x0[out.agents[a] * m + out.topics[t]];
    out.value = value;
    return out;
}

void open_limit(const StochasticMatrix& matrix, const SccDecomposition& decomp,
                std::vector<std::optional<double>>& limits) {
    const auto& P = matrix.sparse();
    if (limits.size() != matrix.dimension()) throw DimensionMismatch("open_limit: limits length");
    // Tarjan numbering: every condensation edge points to a smaller id.
    for (std::size_t c = 0; c < decomp.count(); ++c) {
        const auto& nodes = decomp.components[c];
        if (decomp.closed[c]) {
            for (auto u : nodes)
                if (!limits[u])
                    throw OrderingError("closed component " + std::to_string(c) + " has no limit for node " +
                                        std::to_string(u));
            continue;
        }
        std::vector<double> rhs(nodes.size(), 0.0);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const auto cols = P.row_columns(nodes[k]);
            const auto vals = P.row_values(nodes[k]);
            for (std::size_t e = 0; e < cols.size(); ++e) {
                if (decomp.component_of[cols[e]] == c) continue;
                if (!limits[cols[e]])
                    throw OrderingError("node " + std::to_string(cols[e]) + " downstream of component " +
                                        std::to_string(c) + " has no limit yet");
                rhs[k] += vals[e] * *limits[cols[e]];
            }
        }
        const TransientSolver solver(P.submatrix(nodes, nodes));
        const auto x = solver.solve(rhs);
        for (std::size_t k = 0; k < nodes.size(); ++k) limits[nodes[k]] = x[k];
    }
}

std::vector<double> LimitReport::beliefs(const BeliefSystem& system) const {
    const std::size_t nm = system.agents() * system.topics();
    return {values.begin(), values.begin() + static_cast<std::ptrdiff_t>(nm)};
}

LimitReport structural_limit(const BeliefSystem& system) {
    const auto P = system.system_matrix();
    const auto decomp = scc_decompose(P.graph());
    LimitReport report;
    report.method = LimitReport::Method::Structural;
    std::vector<std::optional<double>> limits(P.dimension());
    for (auto c : decomp.closed_components()) {
        auto cl = closed_limit(system, decomp, c);
        for (auto u : decomp.components[c]) limits[u] = cl.value;
        if (!cl.agents.empty()) report.closed.push_back(std::move(cl));
    }
    open_limit(P, decomp, limits);
    report.values.reserve(limits.size());
    for (const auto& v : limits) report.values.push_back(*v);
    return report;
}

namespace {

// X <- Lambda A X C' + (I - Lambda) X0, all n x m row-major.
void fixed_point_update(const BeliefSystem& system, const std::vector<double>& X, std::vector<double>& next,
                        std::vector<double>& scratch) {
    const std::size_t n = system.agents(), m = system.topics();
    const auto& A = system.social().sparse();
    const auto& C = system.constraints().sparse();
    const auto lambda = system.lambda();
    const auto x0 = system.initial();
    // scratch = X C'
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t u = 0; u < m; ++u) {
            const auto cols = C.row_columns(u);
            const auto vals = C.row_values(u);
            double s = 0.0;
            for (std::size_t k = 0; k < cols.size(); ++k) s += X[j * m + cols[k]] * vals[k];
            scratch[j * m + u] = s;
        }
    for (std::size_t i = 0; i < n; ++i) {
        const auto cols = A.row_columns(i);
        const auto vals = A.row_values(i);
        for (std::size_t u = 0; u < m; ++u) {
            double s = 0.0;
            for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * scratch[cols[k] * m + u];
            next[i * m + u] = lambda[i] * s + (1.0 - lambda[i]) * x0[i * m + u];
        }
    }
}

}  // namespace

LimitReport stubborn_limit(const BeliefSystem& system, const FixedPointOptions& options) {
    const std::size_t n = system.agents(), m = system.topics(), nm = n * m;
    LimitReport report;
    report.method = LimitReport::Method::FixedPoint;
    const auto obl = oblivious_agents(system);
    const auto x0 = system.initial();

    if (std::none_of(obl.begin(), obl.end(), [](bool b) { return b; })) {
        std::vector<double> lambda(system.lambda().begin(), system.lambda().end());
        const SparseMatrix coupled = kron(system.social().sparse().scaled_rows(lambda), system.constraints().sparse());
        std::vector<double> rhs(nm);
        for (std::size_t s = 0; s < nm; ++s) rhs[s] = (1.0 - lambda[s / m]) * x0[s];
        report.values = TransientSolver(coupled).solve(rhs);
        return report;
    }

    std::vector<double> X(x0.begin(), x0.end()), next(nm), scratch(nm);
    const std::size_t check_every = 4096;
    double last_checked = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        fixed_point_update(system, X, next, scratch);
        residual = 0.0;
        for (std::size_t s = 0; s < nm; ++s) residual = std::max(residual, std::abs(next[s] - X[s]));
        X.swap(next);
        if (residual <= options.tolerance) {
            report.values = std::move(X);
            return report;
        }
        if (it % check_every == 0) {
            if (residual >= last_checked * (1.0 - 1e-12))
                throw NoUniqueFixedPoint("fixed-point residual stalled at " + std::to_string(residual));
            last_checked = residual;
        }
    }
    throw FailedToConverge("fixed-point residual " + std::to_string(residual) + " after " +
                           std::to_string(options.max_iterations) + " iterations");
}

SocialPower social_power(const StochasticMatrix& matrix) {
    const auto pi = stationary(matrix);
    SocialPower out;
    out.order.resize(pi.size());
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return pi[a] > pi[b]; });
    double running = 0.0;
    for (auto u : out.order) {
        out.weights.push_back(pi[u]);
        out.cumulative.push_back(running += pi[u]);
    }
    return out;
}

double top_share(const SocialPower& power, double fraction) {
    if (power.cumulative.empty()) return 0.0;
    const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(power.cumulative.size())));
    if (k == 0) return 0.0;
    return power.cumulative[std::min(k, power.cumulative.size()) - 1];
}

}  // namespace kronmix

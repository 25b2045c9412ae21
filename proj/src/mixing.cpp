#include "kronmix/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <string>

#include "kronmix/errors.hpp"
#include "kronmix/parallel.hpp"
#include "kronmix/rng.hpp"
#include "kronmix/transient.hpp"

namespace kronmix {

std::vector<std::size_t> StartPolicy::starts(std::size_t dimension) const {
    if (!explicit_starts.empty()) {
        for (auto s : explicit_starts)
            if (s >= dimension) throw DimensionMismatch("explicit start outside the chain");
        return explicit_starts;
    }
    std::vector<std::size_t> out;
    if (dimension <= exact_limit) {
        out.resize(dimension);
        std::iota(out.begin(), out.end(), 0);
        return out;
    }
    Rng rng = Rng::stream(seed, 0, 0x57a7);
    std::set<std::size_t> chosen;
    while (chosen.size() < std::min(samples, dimension)) chosen.insert(rng.below(dimension));
    return {chosen.begin(), chosen.end()};
}

namespace {

// Steps until TV(P^k(x,.), pi) <= eps; the distance from one start is non-increasing.
std::size_t start_time(const TransitionOperator& op, std::span<const double> pi, std::size_t x,
                       double eps, std::size_t max_steps) {
    const std::size_t n = op.dimension();
    std::vector<double> cur(n, 0.0), next(n);
    cur[x] = 1.0;
    for (std::size_t k = 0;; ++k) {
        if (tv_distance(cur, pi) <= eps) return k;
        if (k == max_steps)
            throw FailedToConverge("mixing time exceeds " + std::to_string(max_steps) + " steps");
        op.apply_left(cur, next);
        cur.swap(next);
    }
}

}  // namespace

std::vector<std::size_t> per_start_mixing_times(const TransitionOperator& op, const Distribution& pi,
                                                std::span<const std::size_t> starts, double epsilon,
                                                std::size_t max_steps) {
    if (pi.size() != op.dimension()) throw DimensionMismatch("pi length");
    std::vector<std::size_t> times(starts.size());
    parallel_for(starts.size(),
                 [&](std::size_t i) { times[i] = start_time(op, pi.values(), starts[i], epsilon, max_steps); });
    return times;
}

MixingTime measure_mixing_time(const TransitionOperator& op, const Distribution& pi,
                               const MixingOptions& options) {
    const auto starts = options.starts.starts(op.dimension());
    const auto times = per_start_mixing_times(op, pi, starts, options.epsilon, options.max_steps);
    MixingTime out;
    out.starts_examined = starts.size();
    out.exact = starts.size() == op.dimension();
    const auto worst = std::max_element(times.begin(), times.end());
    if (worst != times.end()) {
        out.t_mix = *worst;
        out.worst_start = starts[static_cast<std::size_t>(worst - times.begin())];
    }
    if (options.record_curve) out.d_curve = distance_curve(op, pi, starts, out.t_mix);
    return out;
}

MixingTime measure_mixing_time(const StochasticMatrix& matrix, const MixingOptions& options) {
    const auto pi = stationary(matrix);
    return measure_mixing_time(static_cast<const TransitionOperator&>(matrix), pi, options);
}

std::vector<double> distance_curve(const TransitionOperator& op, const Distribution& pi,
                                   std::span<const std::size_t> starts, std::size_t steps) {
    std::vector<std::vector<double>> per(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        const std::size_t n = op.dimension();
        std::vector<double> cur(n, 0.0), next(n);
        cur[starts[i]] = 1.0;
        auto& curve = per[i];
        curve.reserve(steps + 1);
        for (std::size_t k = 0; k <= steps; ++k) {
            curve.push_back(tv_distance(cur, pi.values()));
            if (k < steps) {
                op.apply_left(cur, next);
                cur.swap(next);
            }
        }
    });
    std::vector<double> d(steps + 1, 0.0);
    for (const auto& curve : per)
        for (std::size_t k = 0; k <= steps; ++k) d[k] = std::max(d[k], curve[k]);
    return d;
}

EigenBounds spectral_bounds(double lambda2, std::size_t n, double epsilon) {
    EigenBounds b;
    b.lambda2 = lambda2;
    const double gap = 1.0 - lambda2;
    b.lower = lambda2 / (2.0 * gap) * std::log(1.0 / (2.0 * epsilon));
    b.upper = (std::log(static_cast<double>(n)) + std::log(1.0 / epsilon)) / gap;
    return b;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Removes the component along the leading left eigenvector: v <- v - (v.1) pi.
void deflate(std::vector<double>& v, std::span<const double> pi) {
    const double mass = std::accumulate(v.begin(), v.end(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= mass * pi[i];
}

// Gram-Schmidt in place; returns false when a vector collapses.
bool orthonormalize(std::vector<std::vector<double>>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double c = dot(basis[i], basis[j]);
            for (std::size_t t = 0; t < basis[i].size(); ++t) basis[i][t] -= c * basis[j][t];
        }
        const double norm = std::sqrt(dot(basis[i], basis[i]));
        if (!(norm > 1e-250)) return false;
        for (auto& x : basis[i]) x /= norm;
    }
    return true;
}

double largest_modulus(const std::vector<std::vector<double>>& H) {
    if (H.size() == 1) return std::abs(H[0][0]);
    const double tr = H[0][0] + H[1][1];
    const double det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        return std::max(std::abs(tr / 2.0 + r), std::abs(tr / 2.0 - r));
    }
    return std::sqrt(std::max(det, 0.0));
}

}  // namespace

EigenBounds eigen_bounds(const TransitionOperator& op, const Distribution& pi, double epsilon,
                         const EigenOptions& options) {
    const std::size_t n = op.dimension();
    if (pi.size() != n) throw DimensionMismatch("pi length");
    if (n <= 1) return spectral_bounds(0.0, std::max<std::size_t>(n, 1), epsilon);

    const std::size_t width = std::min<std::size_t>(2, n - 1);
    Rng rng = Rng::stream(options.seed, 0, 0xe16e);
    auto fresh = [&] {
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform() - 0.5;
        deflate(v, pi.values());
        return v;
    };
    std::vector<std::vector<double>> basis;
    for (std::size_t i = 0; i < width; ++i) basis.push_back(fresh());
    if (!orthonormalize(basis)) throw FailedToConverge("eigen_bounds: degenerate start");

    constexpr std::size_t window = 32;
    std::vector<double> history;
    std::vector<std::vector<double>> image(width, std::vector<double>(n));
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        for (std::size_t i = 0; i < width; ++i) {
            op.apply_left(basis[i], image[i]);
            deflate(image[i], pi.values());
        }
        std::vector<std::vector<double>> H(width, std::vector<double>(width));
        for (std::size_t i = 0; i < width; ++i)
            for (std::size_t j = 0; j < width; ++j) H[i][j] = dot(image[i], basis[j]);
        const double estimate = largest_modulus(H);
        history.push_back(estimate);

        const double scale = std::sqrt(dot(image[0], image[0])) + (width > 1 ? std::sqrt(dot(image[1], image[1])) : 0.0);
        if (scale < 1e-300) {
            EigenBounds b = spectral_bounds(0.0, n, epsilon);
            b.iterations = it;
            return b;
        }
        basis.swap(image);
        if (!orthonormalize(basis)) {
            // The deflated operator has rank below the block width; restart the
            // collapsed direction so the surviving one keeps converging.
            basis.back() = fresh();
            if (!orthonormalize(basis)) {
                EigenBounds b = spectral_bounds(0.0, n, epsilon);
                b.iterations = it;
                return b;
            }
        }
        if (history.size() > window &&
            std::abs(history.back() - history[history.size() - 1 - window]) <= options.tolerance) {
            EigenBounds b = spectral_bounds(std::min(history.back(), 1.0), n, epsilon);
            b.iterations = it;
            return b;
        }
    }
    throw FailedToConverge("eigen_bounds: |lambda_2| estimate did not settle within " +
                           std::to_string(options.max_iterations) + " iterations");
}

EigenBounds eigen_bounds(const StochasticMatrix& matrix, double epsilon, const EigenOptions& options) {
    const auto pi = stationary(matrix);
    return eigen_bounds(static_cast<const TransitionOperator&>(matrix), pi, epsilon, options);
}

namespace {

struct TrialBatch {
    double sum = 0.0, sum_sq = 0.0;
    std::size_t coupled = 0, capped = 0;
};

TrialBatch run_trials(const TransitionOperator& op, std::size_t x, std::size_t y, std::size_t trials,
                      std::size_t step_cap, std::uint64_t seed, std::uint64_t stream_base,
                      std::uint64_t tag) {
    std::vector<std::size_t> K(trials);
    std::vector<bool> hit(trials);
    parallel_for(trials, [&](std::size_t t) {
        Rng rng = Rng::stream(seed, stream_base + t, tag);
        std::size_t a = x, b = y, k = 0;
        while (a != b && k < step_cap) {
            a = op.sample_next(a, rng.uniform());
            b = op.sample_next(b, rng.uniform());
            ++k;
        }
        K[t] = k;
        hit[t] = a == b;
    });
    TrialBatch batch;
    for (std::size_t t = 0; t < trials; ++t) {
        if (!hit[t]) {
            ++batch.capped;
            continue;
        }
        const double v = static_cast<double>(K[t]);
        batch.sum += v;
        batch.sum_sq += v * v;
        ++batch.coupled;
    }
    return batch;
}

CouplingEstimate summarize(const TrialBatch& batch, std::size_t x, std::size_t y) {
    CouplingEstimate e;
    e.start_x = x;
    e.start_y = y;
    e.trials = batch.coupled;
    e.capped = batch.capped;
    if (batch.coupled == 0) throw AllTrialsCapped("no trial coupled within the step cap");
    const double c = static_cast<double>(batch.coupled);
    e.mean = batch.sum / c;
    if (batch.coupled > 1) {
        const double var = std::max(0.0, (batch.sum_sq - c * e.mean * e.mean) / (c - 1.0));
        e.std_error = std::sqrt(var / c);
    }
    return e;
}

}  // namespace

CouplingEstimate coupling_time_from(const TransitionOperator& op, std::size_t x, std::size_t y,
                                    const CouplingOptions& options) {
    if (x >= op.dimension() || y >= op.dimension()) throw DimensionMismatch("start outside the chain");
    return summarize(run_trials(op, x, y, options.trials, options.step_cap, options.seed, 0, 0xc0),
                     x, y);
}

CouplingEstimate estimate_coupling_time(const TransitionOperator& op, const CouplingOptions& options) {
    const std::size_t n = op.dimension();
    if (n <= 1) {
        CouplingEstimate e;
        e.trials = options.trials;
        return e;
    }
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    if (n <= options.all_pairs_limit)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) pairs.insert({a, b});
    Rng rng = Rng::stream(options.seed, 0, 0xa1);
    for (std::size_t r = 0; r < options.random_pairs; ++r) {
        std::size_t a = rng.below(n), b = rng.below(n - 1);
        if (b >= a) ++b;
        pairs.insert({std::min(a, b), std::max(a, b)});
    }

    const std::size_t pilot = std::max<std::size_t>(options.trials / 8, 1);
    std::pair<std::size_t, std::size_t> worst = *pairs.begin();
    double worst_score = -1.0;
    std::uint64_t index = 0;
    for (const auto& [a, b] : pairs) {
        const auto batch = run_trials(op, a, b, pilot, options.step_cap, options.seed, index++ << 32, 0xb2);
        const double score = (batch.sum + static_cast<double>(batch.capped * options.step_cap)) /
                             static_cast<double>(pilot);
        if (score > worst_score) {
            worst_score = score;
            worst = {a, b};
        }
    }
    return summarize(run_trials(op, worst.first, worst.second, options.trials, options.step_cap,
                                options.seed, 0, 0xf3),
                     worst.first, worst.second);
}

AbsorbingTimes expected_absorbing_time(const StochasticMatrix& matrix, const SccDecomposition& decomp) {
    if (decomp.closed_components().empty()) throw StructuralError("no closed component");
    AbsorbingTimes out;
    const std::size_t n = matrix.dimension();
    out.per_node.assign(n, 0.0);
    std::vector<std::size_t> transient;
    for (std::size_t u = 0; u < n; ++u)
        if (!decomp.closed[decomp.component_of[u]]) transient.push_back(u);
    if (transient.empty()) return out;

    const auto& P = matrix.sparse();
    const TransientSolver solver(P.submatrix(transient, transient));
    const auto h = solver.solve(std::vector<double>(transient.size(), 1.0));
    for (std::size_t k = 0; k < transient.size(); ++k) {
        out.per_node[transient[k]] = h[k];
        out.H = std::max(out.H, h[k]);
    }

    // Exit time of each open component on its own, then the heaviest path
    // through the condensation (edges point to smaller component ids).
    std::vector<double> best(decomp.count(), 0.0);
    std::vector<std::vector<std::size_t>> successors(decomp.count());
    for (auto [a, b] : decomp.condensation_edges) successors[a].push_back(b);
    for (std::size_t c = 0; c < decomp.count(); ++c) {
        if (decomp.closed[c]) continue;
        const auto& nodes = decomp.components[c];
        const TransientSolver local(P.submatrix(nodes, nodes));
        const auto exit = local.solve(std::vector<double>(nodes.size(), 1.0));
        double downstream = 0.0;
        for (auto d : successors[c]) downstream = std::max(downstream, best[d]);
        best[c] = *std::max_element(exit.begin(), exit.end()) + downstream;
        out.path_sum = std::max(out.path_sum, best[c]);
    }
    return out;
}

double theorem_bound(double L_G, double L_T, double H_G, double H_T, double epsilon) {
    return 32.0 * (std::max(L_T, L_G) + std::max(H_T, H_G)) * std::log(1.0 / epsilon);
}

double lemma_bound(double L, double H, double epsilon) {
    return 4.0 * (L + H) * std::log(1.0 / epsilon);
}

ChainTimes chain_times(const StochasticMatrix& matrix, const CouplingOptions& options) {
    ChainTimes out;
    const auto decomp = scc_decompose(matrix.graph());
    for (auto c : decomp.closed_components()) {
        if (decomp.period[c] > 1)
            throw NotErgodic("closed component with period " + std::to_string(decomp.period[c]));
        if (decomp.components[c].size() < 2) continue;
        const auto sub = matrix.restricted(decomp.components[c]);
        auto est = estimate_coupling_time(sub, options);
        est.start_x = decomp.components[c][est.start_x];
        est.start_y = decomp.components[c][est.start_y];
        if (est.mean > out.coupling.mean || out.coupling.trials == 0) out.coupling = est;
    }
    out.H = expected_absorbing_time(matrix, decomp).H;
    return out;
}

SystemTimes system_times(const BeliefSystem& system, const CouplingOptions& options) {
    SystemTimes out;
    const auto obl = oblivious_agents(system);
    std::vector<std::size_t> agents;
    for (std::size_t i = 0; i < obl.size(); ++i)
        if (obl[i]) agents.push_back(i);
    if (!agents.empty()) out.agents = chain_times(system.social().restricted(agents), options);
    out.topics = chain_times(system.constraints(), options);
    return out;
}

std::vector<double> distance_to_limit(const BeliefSystem& system, std::span<const double> limit_beliefs,
                                      std::size_t steps) {
    const std::size_t nm = system.agents() * system.topics();
    if (limit_beliefs.size() != nm) throw DimensionMismatch("limit must have n*m entries");
    auto state = BeliefState::initial(system);
    std::vector<double> out;
    out.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        double d = 0.0;
        for (std::size_t s = 0; s < nm; ++s) d = std::max(d, std::abs(state.x[s] - limit_beliefs[s]));
        out.push_back(d);
        if (k < steps) step(system, state);
    }
    return out;
}

}  // namespace kronmix

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "kronmix/belief.hpp"
#include "kronmix/errors.hpp"
#include "kronmix/generators.hpp"
#include "kronmix/kron.hpp"
#include "kronmix/limits.hpp"
#include "kronmix/mixing.hpp"
#include "kronmix/netio.hpp"
#include "oracles.hpp"

using namespace kronmix;

namespace {

struct Outcome {
    enum class Status { Pass, Fail, Skip } status = Status::Fail;
    std::string detail;
};

Outcome pass_if(bool ok, std::string detail) { return {ok ? Outcome::Status::Pass : Outcome::Status::Fail, detail}; }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

StochasticMatrix family_matrix(Family f, std::size_t n, double lazy = 0.0, std::size_t k = 0, double p = 0.0,
                               std::uint64_t seed = 0) {
    TopologySpec s;
    s.family = f;
    s.n = n;
    s.k = k;
    s.p = p;
    s.seed = seed;
    auto g = generate(s);
    if (lazy > 0.0) g = lazify(g, lazy);
    return equal_weight_matrix(g);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) { return loglog_slope(x, y); }

// 1. Convergence verdict against iterating the dense system matrix.
Outcome convergence_oracle() {
    Rng rng(1001);
    int disagreements = 0, ambiguous = 0, convergent = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = oracle::random_system(6, 6, rng);
        const oracle::Dense P = oracle::system_matrix(s);
        oracle::Dense Q = P;
        for (int i = 0; i < 20; ++i) Q = Q * Q;  // P^(2^20)
        const oracle::Dense step = Q * P - Q;
        double worst = 0.0;
        for (int start = 0; start < 20; ++start) {
            oracle::Vec x(P.rows());
            for (auto i = 0; i < x.size(); ++i) x[i] = rng.uniform();
            worst = std::max(worst, (step * x).cwiseAbs().maxCoeff());
        }
        const bool verdict = converges(s).converges;
        if (worst < 1e-8) {
            convergent += 1;
            disagreements += !verdict;
        } else if (worst > 1e-6) {
            disagreements += verdict;
        } else {
            ++ambiguous;
        }
    }
    return pass_if(disagreements == 0 && ambiguous == 0,
                   fmt("%d disagreements, %d ambiguous, %d/200 convergent", disagreements, ambiguous, convergent));
}

// 2. Product SCC structure against transitive-closure and boolean-power oracles.
Outcome product_components() {
    Rng rng(1002);
    int violations = 0, strongly_connected_pairs = 0;
    auto factor = [&] {
        const std::size_t n = 1 + rng.below(6);
        switch (rng.below(3)) {
            case 0: {
                const std::size_t d = 1 + rng.below(n);
                const std::size_t len = n - n % d;
                auto g = oracle::layered_cycle(len, d, 0.4, rng);
                if (len == n) return g;
                auto e = g.edges();
                for (std::size_t u = len; u < n; ++u) e.push_back({u, rng.below(n)});
                return DirectedGraph(n, e);
            }
            case 1: return oracle::random_digraph(n, 0.25, rng);
            default: return oracle::random_digraph(n, 0.45, rng);
        }
    };
    for (int trial = 0; trial < 200; ++trial) {
        const auto g1 = factor(), g2 = factor();
        const auto prod = kron_graph(g1, g2);
        const auto d = scc_decompose(prod);
        const auto l1 = oracle::scc_labels(g1), l2 = oracle::scc_labels(g2), lp = oracle::scc_labels(prod);
        const std::size_t m = g2.node_count();

        // Library partition equals the oracle partition.
        for (std::size_t a = 0; a < prod.node_count(); ++a)
            for (std::size_t b = 0; b < a; ++b)
                violations += (lp[a] == lp[b]) != (d.component_of[a] == d.component_of[b]);

        // Containment in exactly one S1 x S2.
        for (const auto& comp : d.components) {
            std::set<std::pair<std::size_t, std::size_t>> owners;
            for (auto node : comp) owners.insert({l1[node / m], l2[node % m]});
            violations += owners.size() != 1;
        }
        violations += !product_scc_check(g1, g2, d).ok();

        const bool sc1 = std::all_of(l1.begin(), l1.end(), [](auto v) { return v == 0; });
        const bool sc2 = std::all_of(l2.begin(), l2.end(), [](auto v) { return v == 0; });
        if (sc1 && sc2 && g1.edge_count() > 0 && g2.edge_count() > 0) {
            ++strongly_connected_pairs;
            std::vector<std::size_t> all1(g1.node_count()), all2(g2.node_count());
            std::iota(all1.begin(), all1.end(), 0);
            std::iota(all2.begin(), all2.end(), 0);
            const auto d1 = oracle::period_by_powers(g1, all1), d2 = oracle::period_by_powers(g2, all2);
            violations += d.count() != std::gcd(d1, d2);
            for (const auto& comp : d.components)
                violations += oracle::period_by_powers(prod, comp) != std::lcm(d1, d2);
        }
    }
    return pass_if(violations == 0,
                   fmt("%d violations, %d strongly connected pairs", violations, strongly_connected_pairs));
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// 3. Structural limit, fixed point and simulation agree.
Outcome limit_consistency() {
    Rng rng(1003);
    int checked = 0, failures = 0;
    double worst = 0.0;
    while (checked < 100) {
        const auto s = oracle::random_system(6, 6, rng);
        if (!converges(s).converges) continue;
        ++checked;
        try {
            const auto structural = structural_limit(s).beliefs(s);
            const auto fixed = stubborn_limit(s, {1e-14, 50'000'000}).values;
            SimulationOptions o;
            o.stop_delta = 1e-14;
            o.max_iterations = 50'000'000;
            const auto sim = simulate(s, o);
            const auto simulated = current_beliefs(s, sim.final_state.x);
            const double d = std::max({max_diff(structural, fixed), max_diff(structural, simulated),
                                       max_diff(fixed, simulated)});
            worst = std::max(worst, d);
            failures += !(d <= 1e-7);
        } catch (const Error& e) {
            std::printf("    system %d: %s\n", checked, e.what());
            ++failures;
        }
    }
    return pass_if(failures == 0, fmt("%d failures over 100 systems, worst pairwise gap %.2e", failures, worst));
}

// 4. Stationary distribution of a product factorizes.
Outcome stationary_factorization() {
    Rng rng(1004);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto M1 = oracle::random_ergodic(2 + rng.below(29), 0.15, rng);
        const auto M2 = oracle::random_ergodic(2 + rng.below(29), 0.15, rng);
        const auto product = std::get<StochasticMatrix>(kron(M1, M2, true));
        const auto pi = stationary(product);
        const auto p1 = stationary(M1), p2 = stationary(M2);
        double l1 = 0.0;
        for (std::size_t i = 0; i < M1.dimension(); ++i)
            for (std::size_t u = 0; u < M2.dimension(); ++u)
                l1 += std::abs(pi.values()[pair_index(i, u, M2.dimension())] - p1.values()[i] * p2.values()[u]);
        worst = std::max(worst, l1);
    }
    return pass_if(worst <= 1e-10, fmt("worst L1 gap %.2e over 50 pairs", worst));
}

// 5. Scaling of t_mix(1/4) with n.
Outcome scaling_laws() {
    auto sweep = [](const std::vector<std::size_t>& sizes, auto make) {
        std::vector<double> x, y;
        for (auto n : sizes) {
            x.push_back(static_cast<double>(n));
            y.push_back(static_cast<double>(measure_mixing_time(make(n)).t_mix));
        }
        return slope(x, y);
    };
    std::vector<std::size_t> odd, evenish, trees;
    for (std::size_t n = 11; n <= 101; n += 10) odd.push_back(n);
    for (std::size_t n = 10; n <= 100; n += 10) evenish.push_back(n);
    for (std::size_t n = 15; n <= 1023; n = 2 * n + 1) trees.push_back(n);

    const double cycle = sweep(odd, [](auto n) { return family_matrix(Family::Cycle, n); });
    const double path = sweep(evenish, [](auto n) { return family_matrix(Family::Path, n, 0.5); });
    const double star = sweep(odd, [](auto n) { return family_matrix(Family::Star, n, 0.5); });
    const double tree = sweep(trees, [](auto n) { return family_matrix(Family::BinaryTree, n, 0.5); });
    const bool ok = std::abs(cycle - 2.0) <= 0.3 && std::abs(path - 2.0) <= 0.3 && std::abs(star) <= 0.15 &&
                    std::abs(tree - 1.0) <= 0.3;
    return pass_if(ok, fmt("slopes: odd cycle %.3f, lazy path %.3f, lazy star %.3f, lazy binary tree %.3f", cycle,
                           path, star, tree));
}

// 6. Product mixing time sits between max(t1, t2) and 8 max(t1, t2) + 4.
Outcome product_max_behavior() {
    Rng rng(1006);
    int violations = 0;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto factor = [&]() -> StochasticMatrix {
            const std::size_t n = 3 + rng.below(38);
            switch (rng.below(4)) {
                case 0: return family_matrix(Family::Cycle, n, 0.5);
                case 1: return family_matrix(Family::Path, n, 0.5);
                case 2: return family_matrix(Family::Star, n, 0.5);
                default: return oracle::random_ergodic(n, 0.1, rng);
            }
        };
        const auto M1 = factor(), M2 = factor();
        const auto t1 = measure_mixing_time(M1).t_mix, t2 = measure_mixing_time(M2).t_mix;
        const ProductOperator op(M1, M2);
        const auto pi = stationary(op);
        const auto t = measure_mixing_time(op, pi).t_mix;
        const auto hi = std::max(t1, t2);
        violations += t < hi || t > 8 * hi + 4;
        worst_ratio = std::max(worst_ratio, static_cast<double>(t) / static_cast<double>(std::max<std::size_t>(hi, 1)));
    }
    return pass_if(violations == 0, fmt("%d violations over 20 pairs, largest t/max(t1,t2) = %.2f", violations,
                                        worst_ratio));
}

// 7. Distance to the limit after the composite-bound number of steps.
Outcome composite_bound() {
    struct Pairing {
        const char* name;
        StochasticMatrix A, C;
    };
    std::vector<Pairing> pairings;
    pairings.push_back({"grid 15x15 x star 50", family_matrix(Family::Grid, 15, 0.5, 2),
                        family_matrix(Family::Star, 50, 0.5)});
    pairings.push_back({"erdos-renyi 200 x dumbbell 30", family_matrix(Family::ErdosRenyi, 200, 0.5, 0, 0.04, 7),
                        family_matrix(Family::Dumbbell, 30, 0.5)});
    pairings.push_back({"newman-watts 300 x path 30", family_matrix(Family::NewmanWatts, 300, 0.5, 2, 0.1, 7),
                        family_matrix(Family::Path, 30, 0.5)});
    int violations = 0;
    std::string detail;
    Rng rng(1007);
    for (const auto& p : pairings) {
        std::vector<double> x0(p.A.dimension() * p.C.dimension());
        for (auto& v : x0) v = rng.uniform();
        const auto s = assemble(p.A, p.C, std::vector<double>(p.A.dimension(), 1.0), x0);
        CouplingOptions o;
        o.seed = 17;
        const auto times = system_times(s, o);
        const auto limit = structural_limit(s).beliefs(s);
        const double L = std::max(times.agents.coupling.mean, times.topics.coupling.mean);
        const double H = std::max(times.agents.H, times.topics.H);
        const auto k_quarter = static_cast<std::size_t>(std::ceil(times.bound(0.25)));
        const auto k_sixteenth = static_cast<std::size_t>(std::ceil(times.bound(1.0 / 16)));
        const auto d = distance_to_limit(s, limit, k_sixteenth);
        violations += d[k_quarter] > 0.25;
        violations += d[k_sixteenth] > 1.0 / 16;
        detail += fmt("\n    %s: L=%.1f H=%.1f k=%zu/%zu d=%.1e/%.1e", p.name, L, H, k_quarter, k_sixteenth,
                      d[k_quarter], d[k_sixteenth]);
    }
    return pass_if(violations == 0, fmt("%d violations", violations) + detail);
}

// 8. Absorption probabilities and times against random walks.
Outcome absorbing_machinery() {
    Rng rng(1008);
    int done = 0, row_failures = 0, mc_failures = 0;
    double worst_z = 0.0;
    while (done < 20) {
        const std::size_t n = 4 + rng.below(20);
        auto g = oracle::random_digraph(n, 2.0 / static_cast<double>(n), rng);
        const auto M = equal_weight_matrix(g);
        const auto decomp = scc_decompose(g);
        if (decomp.closed_components().size() == decomp.count()) continue;
        ++done;
        const auto block = absorbing_probabilities(M, decomp);
        for (std::size_t t = 0; t < block.transient.size(); ++t) {
            double sum = 0.0;
            for (std::size_t r = 0; r < block.recurrent.size(); ++r) sum += block.absorb_at(t, r);
            row_failures += std::abs(sum - 1.0) > 1e-9;
        }
        const auto h = block.expected_steps();
        const auto worst = static_cast<std::size_t>(std::max_element(h.begin(), h.end()) - h.begin());
        std::vector<bool> recurrent(n, false);
        for (auto r : block.recurrent) recurrent[r] = true;
        const int trials = 20000;
        double sum = 0.0, sum_sq = 0.0;
        Rng walk = Rng::stream(1008, done);
        for (int trial = 0; trial < trials; ++trial) {
            std::size_t state = block.transient[worst], steps = 0;
            while (!recurrent[state]) {
                state = M.sample_next(state, walk.uniform());
                ++steps;
            }
            sum += static_cast<double>(steps);
            sum_sq += static_cast<double>(steps) * static_cast<double>(steps);
        }
        const double mean = sum / trials;
        const double se = std::sqrt(std::max(0.0, sum_sq / trials - mean * mean) / trials);
        const double z = se > 0 ? std::abs(mean - h[worst]) / se : std::abs(mean - h[worst]) * 1e12;
        worst_z = std::max(worst_z, z);
        mc_failures += z > 3.0;
    }
    return pass_if(row_failures == 0 && mc_failures == 0,
                   fmt("%d row-sum failures, %d Monte-Carlo mismatches, largest |z| = %.2f", row_failures,
                       mc_failures, worst_z));
}

// 9. Geometric decay of the distance to the limit.
Outcome exponential_convergence() {
    TopologySpec path;
    path.family = Family::Path;
    path.n = 10;
    path.directed = true;
    const auto A = family_matrix(Family::Cycle, 15);
    const auto C = equal_weight_matrix(generate(path));
    Rng rng(1009);
    std::vector<double> x0(150);
    for (auto& v : x0) v = rng.uniform();
    const auto s = assemble(A, C, std::vector<double>(15, 1.0), x0);
    const auto limit = structural_limit(s).beliefs(s);
    const auto d = distance_to_limit(s, limit, 4000);
    std::size_t last = 0;
    while (last + 1 < d.size() && d[last + 1] > 1e-12) ++last;
    const std::size_t first = last / 2;
    std::vector<double> k, logd;
    for (std::size_t i = first; i <= last; ++i) {
        k.push_back(static_cast<double>(i));
        logd.push_back(std::log(d[i]));
    }
    const double kn = static_cast<double>(k.size());
    const double mk = std::accumulate(k.begin(), k.end(), 0.0) / kn;
    const double ml = std::accumulate(logd.begin(), logd.end(), 0.0) / kn;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        sxy += (k[i] - mk) * (logd[i] - ml);
        sxx += (k[i] - mk) * (k[i] - mk);
        syy += (logd[i] - ml) * (logd[i] - ml);
    }
    const double r2 = sxy * sxy / (sxx * syy);
    return pass_if(k.size() >= 10 && r2 >= 0.98, fmt("R^2 = %.5f over k in [%zu, %zu], rate %.5f per step", r2, first,
                                                      last, std::exp(sxy / sxx)));
}

// 10. Dataset counts, when the files are supplied.
Outcome datasets() {
    struct Dataset {
        const char* env;
        const char* name;
        bool directed;
        std::size_t raw_nodes, scc_nodes;  // 0: not checked
        double paper_upper;
    };
    const Dataset sets[] = {{"KRONMIX_WIKI_VOTE", "wiki-Vote", true, 7115, 1300, 145},
                            {"KRONMIX_CA_GRQC", "ca-GrQc", true, 0, 4158, 12308},
                            {"KRONMIX_EGO_FACEBOOK", "ego-Facebook", false, 0, 0, 53546}};
    int seen = 0, failures = 0;
    std::string detail;
    for (const auto& set : sets) {
        const char* path = std::getenv(set.env);
        if (!path || !*path) continue;
        ++seen;
        try {
            const auto report = ingest(path, set.directed);
            if (set.raw_nodes) failures += report.raw_nodes != set.raw_nodes;
            if (set.scc_nodes) failures += report.scc_nodes != set.scc_nodes;
            const auto scc = largest_scc(load_edgelist(path, set.directed));
            std::string bound = "n/a";
            try {
                const auto b = eigen_bounds(equal_weight_matrix(scc.graph), 0.25);
                bound = fmt("%.0f (paper %.0f, %+.1f%%)", b.upper, set.paper_upper,
                            100.0 * (b.upper - set.paper_upper) / set.paper_upper);
            } catch (const Error& e) {
                bound = e.what();
            }
            detail += fmt("\n    %s: raw %zu nodes / %zu edges, largest SCC %zu nodes / %zu edges, upper bound ",
                          set.name, report.raw_nodes, report.raw_edges, report.scc_nodes, report.scc_edges) +
                      bound;
        } catch (const Error& e) {
            ++failures;
            detail += fmt("\n    %s: %s", set.name, e.what());
        }
    }
    if (seen == 0)
        return {Outcome::Status::Skip,
                "no datasets supplied (set KRONMIX_WIKI_VOTE, KRONMIX_CA_GRQC, KRONMIX_EGO_FACEBOOK)"};
    return pass_if(failures == 0, fmt("%d count mismatches over %d datasets", failures, seen) + detail);
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "convergence verdict vs empirical oracle", 60, convergence_oracle},
        {2, "product SCC structure", 60, product_components},
        {3, "limit consistency", 120, limit_consistency},
        {4, "stationary factorization", 60, stationary_factorization},
        {5, "mixing-time scaling laws", 300, scaling_laws},
        {6, "product max-behavior", 180, product_max_behavior},
        {7, "composite bound", 300, composite_bound},
        {8, "absorbing machinery", 60, absorbing_machinery},
        {9, "exponential convergence", 30, exponential_convergence},
        {10, "dataset counts", 600, datasets},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {Outcome::Status::Fail, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.status == Outcome::Status::Pass && seconds > c.budget_seconds) {
            out.status = Outcome::Status::Fail;
            out.detail += fmt(" [over the %.0f s budget]", c.budget_seconds);
        }
        const char* tag = out.status == Outcome::Status::Pass ? "PASS" : out.status == Outcome::Status::Skip ? "SKIP" : "FAIL";
        failed += out.status == Outcome::Status::Fail;
        std::printf("%s  C%-2d %-40s %7.2fs  %s\n", tag, c.id, c.name, seconds, out.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

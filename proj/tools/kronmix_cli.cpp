#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "kronmix/belief.hpp"
#include "kronmix/errors.hpp"
#include "kronmix/generators.hpp"
#include "kronmix/limits.hpp"
#include "kronmix/mixing.hpp"
#include "kronmix/netio.hpp"

using json = nlohmann::json;
using namespace kronmix;

namespace {

int exit_code(const Error& e) {
    switch (e.category()) {
        case Error::Category::Config: return 2;
        case Error::Category::Parse: return 3;
        case Error::Category::Analysis: return 4;
    }
    return 4;
}

// Every config key becomes a --key flag; values given on the command line
// are applied after the config file.
struct SystemFlags {
    std::string config_file;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "key = value file; flags override it");
        for (const auto& key : config_keys()) app->add_option("--" + key, values[key]);
    }

    ExperimentConfig resolve(const CLI::App* app) const {
        ExperimentConfig config = config_file.empty() ? ExperimentConfig{} : load_config(config_file);
        for (const auto& [key, value] : values)
            if (app->count("--" + key) > 0) apply_setting(config, key, value);
        return config;
    }
};

json components_json(const DirectedGraph& graph) {
    const auto d = scc_decompose(graph);
    json out = json::array();
    for (std::size_t c = 0; c < d.count(); ++c)
        out.push_back({{"id", c},
                       {"size", d.components[c].size()},
                       {"closed", static_cast<bool>(d.closed[c])},
                       {"period", d.period[c]},
                       {"trivial", static_cast<bool>(d.trivial[c])}});
    return out;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<std::size_t> to_indices(const std::vector<bool>& mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(i);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kronmix: belief dynamics on Kronecker-coupled networks"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a generated topology as an edge list");
    std::string family = "cycle", gen_out;
    TopologySpec spec;
    std::size_t bridge = 0;
    double lazy = 0.0;
    gen->add_option("--family", family, "cycle, path, star, two-star, complete, dumbbell, lollipop, bolas, "
                                        "binary-tree, hypercube, grid-kd, torus-kd, eulerian-ring, erdos-renyi, "
                                        "newman-watts, geometric");
    gen->add_option("--n", spec.n);
    gen->add_option("--k", spec.k);
    gen->add_option("--p", spec.p);
    gen->add_option("--r", spec.r);
    gen->add_option("--bridge", bridge);
    gen->add_flag("--directed", spec.directed);
    gen->add_option("--seed", spec.seed);
    gen->add_option("--lazy", lazy, "lazify with this self weight");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    SystemFlags analyze_flags, simulate_flags, mixing_flags, limits_flags, experiment_flags;
    auto* analyze = app.add_subcommand("analyze", "SCCs, periods and the convergence verdict");
    analyze_flags.attach(analyze);

    auto* sim = app.add_subcommand("simulate", "Iterate the belief update until it settles");
    simulate_flags.attach(sim);
    SimulationOptions sim_options;
    bool print_beliefs = false;
    sim->add_option("--stop-delta", sim_options.stop_delta);
    sim->add_option("--max-iterations", sim_options.max_iterations);
    sim->add_flag("--print-beliefs", print_beliefs);

    auto* mixing = app.add_subcommand("mixing", "Mixing time, spectral bounds and coupling estimates");
    mixing_flags.attach(mixing);

    auto* limits = app.add_subcommand("limits", "Structural and fixed-point limits");
    limits_flags.attach(limits);

    auto* experiment = app.add_subcommand("experiment", "Run a sweep and write CSV and SVG files");
    experiment_flags.attach(experiment);

    auto* ingest_cmd = app.add_subcommand("ingest", "Validate a dataset and report node counts");
    std::string dataset, sha, report_out;
    bool undirected = false, instructions = false;
    ingest_cmd->add_option("path", dataset, "SNAP edge list");
    ingest_cmd->add_flag("--undirected", undirected, "symmetrize edges");
    ingest_cmd->add_option("--sha256", sha, "expected checksum");
    ingest_cmd->add_option("--out", report_out, "write the JSON report here too");
    ingest_cmd->add_flag("--instructions", instructions, "write download instructions instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            spec.family = parse_family(family);
            if (gen->count("--bridge")) spec.bridge = bridge;
            auto graph = generate(spec);
            if (lazy > 0.0) graph = lazify(graph, lazy);
            std::ofstream file;
            if (!gen_out.empty()) {
                file.open(gen_out);
                if (!file) throw ConfigError("cannot write " + gen_out);
            }
            std::ostream& out = gen_out.empty() ? std::cout : file;
            out << "# " << family_name(spec.family) << " nodes " << graph.node_count() << " edges "
                << graph.edge_count() << '\n';
            for (const auto& e : graph.edges()) {
                out << e.source << '\t' << e.target;
                if (graph.weighted()) out << '\t' << e.weight;
                out << '\n';
            }
            return 0;
        }

        if (analyze->parsed()) {
            const auto config = analyze_flags.resolve(analyze);
            const auto system = build_system(config, std::nullopt, config.seed);
            const auto verdict = converges(system);
            json witnesses = json::array();
            for (const auto& w : verdict.witnesses)
                witnesses.push_back(
                    {{"source", w.source == ConvergenceWitness::Source::ObliviousAgents ? "agents" : "constraints"},
                     {"nodes", w.nodes},
                     {"period", w.period}});
            print({{"agents", system.agents()},
                   {"topics", system.topics()},
                   {"agent_components", components_json(system.social().graph())},
                   {"topic_components", components_json(system.constraints().graph())},
                   {"oblivious", to_indices(verdict.oblivious)},
                   {"converges", verdict.converges},
                   {"witnesses", witnesses}});
            return 0;
        }

        if (sim->parsed()) {
            const auto config = simulate_flags.resolve(sim);
            const auto system = build_system(config, std::nullopt, config.seed);
            const auto result = simulate(system, sim_options);
            json out = {{"iterations", result.iterations},
                        {"reached_tolerance", result.reached_tolerance},
                        {"last_delta", result.last_delta}};
            if (print_beliefs) out["beliefs"] = current_beliefs(system, result.final_state.x);
            print(out);
            return 0;
        }

        if (mixing->parsed()) {
            auto config = mixing_flags.resolve(mixing);
            if (config.metrics.empty()) config.metrics = {"converges", "mixing", "eigen", "coupling"};
            const auto row = run_point(config, std::nullopt, config.seed);
            auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
            print({{"n", row.n},
                   {"m", row.m},
                   {"converges", row.converges ? json(*row.converges) : json(nullptr)},
                   {"t_mix", opt(row.t_mix)},
                   {"lambda2", opt(row.lambda2)},
                   {"lower_bound", opt(row.lower_bound)},
                   {"upper_bound", opt(row.upper_bound)},
                   {"coupling_L", opt(row.coupling_L)},
                   {"coupling_se", opt(row.coupling_se)},
                   {"absorbing_H", opt(row.absorbing_H)},
                   {"theorem_bound", opt(row.theorem_bound)},
                   {"error", row.error}});
            return row.error.empty() ? 0 : 4;
        }

        if (limits->parsed()) {
            const auto config = limits_flags.resolve(limits);
            const auto system = build_system(config, std::nullopt, config.seed);
            json out;
            const auto structural = structural_limit(system);
            out["structural"] = structural.beliefs(system);
            json closed = json::array();
            for (const auto& c : structural.closed)
                closed.push_back({{"agents", c.agents}, {"topics", c.topics}, {"value", c.value}});
            out["closed_components"] = closed;
            try {
                out["fixed_point"] = stubborn_limit(system).values;
            } catch (const Error& e) {
                out["fixed_point_error"] = e.what();
            }
            try {
                const auto power = social_power(system.social());
                out["top20_share"] = top_share(power, 0.2);
            } catch (const Error& e) {
                out["top20_share_error"] = e.what();
            }
            print(out);
            return 0;
        }

        if (experiment->parsed()) {
            const auto config = experiment_flags.resolve(experiment);
            const auto rows = run_experiment(config);
            for (const auto& path : write_outputs(config, rows)) std::cout << path.string() << '\n';
            return 0;
        }

        if (ingest_cmd->parsed()) {
            if (instructions) {
                const std::string text = dataset_instructions();
                if (report_out.empty()) {
                    std::cout << text;
                } else {
                    std::ofstream file(report_out);
                    if (!file) throw ConfigError("cannot write " + report_out);
                    file << text;
                }
                return 0;
            }
            if (dataset.empty()) throw ConfigError("ingest needs a dataset path");
            const auto report = ingest(dataset, !undirected, sha);
            json out = {{"name", report.name},
                        {"raw_nodes", report.raw_nodes},
                        {"raw_edges", report.raw_edges},
                        {"largest_scc_nodes", report.scc_nodes},
                        {"largest_scc_edges", report.scc_edges},
                        {"sha256", report.sha256}};
            if (report.checksum_ok) out["checksum_ok"] = *report.checksum_ok;
            print(out);
            if (!report_out.empty()) {
                std::ofstream file(report_out);
                if (!file) throw ConfigError("cannot write " + report_out);
                file << out.dump(2) << '\n';
            }
            if (report.checksum_ok && !*report.checksum_ok) {
                std::cerr << "checksum mismatch\n";
                return 2;
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 4;
    }
    return 0;
}

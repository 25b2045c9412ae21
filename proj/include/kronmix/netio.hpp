#ifndef KRONMIX_NETIO_HPP
#define KRONMIX_NETIO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kronmix/belief.hpp"
#include "kronmix/generators.hpp"
#include "kronmix/graph.hpp"

namespace kronmix {

/// A graph plus the original node id of every dense index.
struct LabeledGraph {
    DirectedGraph graph;
    std::vector<std::uint64_t> ids;
};

/// SNAP-style edge list: '#' comments, whitespace separated "src dst" pairs.
/// Ids are remapped to 0.. in increasing id order; duplicate edges are
/// merged and undirected input is symmetrized.
/// Throws ParseError (with line number) or EmptyGraph.
LabeledGraph parse_edgelist(std::istream& in, bool directed);
LabeledGraph load_edgelist(const std::filesystem::path& path, bool directed);

/// Induced subgraph on the largest SCC; ties go to the component holding the
/// smallest original id.
LabeledGraph largest_scc(const LabeledGraph& graph);
LabeledGraph largest_scc(const DirectedGraph& graph);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Where a factor graph comes from: a generated topology, or a dataset whose
/// largest SCC is used.
struct GraphSource {
    std::optional<TopologySpec> topology;
    std::filesystem::path dataset;
    bool dataset_directed = true;
    double lazy = 0.0;  // lazify alpha; 0 leaves the graph as is
};

enum class LambdaPolicy { Oblivious, Uniform, PerAgent };
enum class SweepVariable { N, M };

struct ExperimentConfig {
    GraphSource agents, topics;
    LambdaPolicy lambda_policy = LambdaPolicy::Oblivious;
    double lambda = 1.0;
    std::filesystem::path lambda_file;
    SweepVariable sweep = SweepVariable::N;
    std::size_t from = 0, to = 0, stride = 1;
    double epsilon = 0.25;
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    std::filesystem::path output_dir = ".";
    std::string name = "experiment";
    /// Subset of {converges, mixing, eigen, coupling, limit}; empty runs all.
    std::vector<std::string> metrics;

    /// Throws ConfigError.
    void validate() const;
    std::vector<std::size_t> sweep_values() const;
    bool wants(std::string_view metric) const;
};

/// Applies one "key = value" setting; keys are the CLI flag names
/// (agents, agents-n, agents-k, ..., sweep, from, to, stride, epsilon, ...).
/// Throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat key = value text; '#' starts a comment. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every key apply_setting understands.
const std::vector<std::string>& config_keys();

struct ExperimentRow {
    std::size_t sweep_value = 0;
    std::size_t n = 0, m = 0;
    std::optional<bool> converges;
    std::optional<double> t_mix, lambda2, lower_bound, upper_bound;
    std::optional<double> coupling_L, coupling_se, absorbing_H, theorem_bound;
    std::optional<double> limit_consensus;
    std::string error;  // first error raised while filling the row
};

/// Builds both factor graphs (the swept one at `sweep_value` when given),
/// equal-weight matrices, lambda per policy and a uniform random x0 drawn from
/// `seed`. Throws module errors.
BeliefSystem build_system(const ExperimentConfig& config, std::optional<std::size_t> sweep_value,
                          std::uint64_t seed);

/// One sweep point (or the configured sizes when `sweep_value` is empty);
/// errors are caught per metric and recorded in the row.
ExperimentRow run_point(const ExperimentConfig& config, std::optional<std::size_t> sweep_value,
                        std::uint64_t seed);

/// Every sweep point in parallel, rows in sweep order.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

std::string_view csv_header();
void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

/// Least-squares slope of log y against log x over the positive pairs.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Log-log scatter with axes and a fitted-slope annotation.
void write_svg(std::ostream& out, std::string_view title, std::string_view x_label, std::string_view y_label,
               const std::vector<double>& x, const std::vector<double>& y);

/// Writes <name>.csv and one <name>_<metric>.svg per numeric column that has
/// at least two positive values. Returns the files written.
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config,
                                                 const std::vector<ExperimentRow>& rows);

struct IngestReport {
    std::string name;
    std::size_t raw_nodes = 0, raw_edges = 0;
    std::size_t scc_nodes = 0, scc_edges = 0;
    std::string sha256;
    std::optional<bool> checksum_ok;  // set when an expected checksum was given
};

/// Loads a dataset, records raw and largest-SCC counts and checks the
/// checksum when `expected_sha256` is non-empty.
IngestReport ingest(const std::filesystem::path& path, bool directed, std::string_view expected_sha256 = {});

/// Download instructions for the datasets the experiments know about.
std::string dataset_instructions();

}  // namespace kronmix

#endif  // KRONMIX_NETIO_HPP

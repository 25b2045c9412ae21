#include "kronmix/netio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <openssl/evp.h>

#include "kronmix/belief.hpp"
#include "kronmix/errors.hpp"
#include "kronmix/kron.hpp"
#include "kronmix/limits.hpp"
#include "kronmix/mixing.hpp"
#include "kronmix/parallel.hpp"
#include "kronmix/rng.hpp"
#include "kronmix/stochastic.hpp"

namespace kronmix {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& value) {
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    return ec == std::errc() && ptr == end;
}

}  // namespace

LabeledGraph parse_edgelist(std::istream& in, bool directed) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto parts = tokens(body);
        if (parts.size() != 2) throw ParseError(line_no, "expected \"src dst\", got \"" + std::string(body) + "\"");
        std::uint64_t a = 0, b = 0;
        if (!parse_number(parts[0], a) || !parse_number(parts[1], b))
            throw ParseError(line_no, "node ids must be non-negative integers");
        raw.emplace_back(a, b);
    }
    if (raw.empty()) throw EmptyGraph("edge list has no edges");

    LabeledGraph out;
    out.ids.reserve(2 * raw.size());
    for (auto [a, b] : raw) {
        out.ids.push_back(a);
        out.ids.push_back(b);
    }
    std::sort(out.ids.begin(), out.ids.end());
    out.ids.erase(std::unique(out.ids.begin(), out.ids.end()), out.ids.end());
    auto dense = [&](std::uint64_t id) {
        return static_cast<std::size_t>(std::lower_bound(out.ids.begin(), out.ids.end(), id) - out.ids.begin());
    };
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (auto [a, b] : raw) edges.push_back({dense(a), dense(b)});
    out.graph = directed ? DirectedGraph(out.ids.size(), std::move(edges))
                         : DirectedGraph::undirected(out.ids.size(), edges);
    return out;
}

LabeledGraph load_edgelist(const std::filesystem::path& path, bool directed) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return parse_edgelist(in, directed);
}

LabeledGraph largest_scc(const LabeledGraph& labeled) {
    const auto decomp = scc_decompose(labeled.graph);
    if (decomp.count() == 0) throw EmptyGraph("graph has no nodes");
    auto min_id = [&](std::size_t c) {
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (auto u : decomp.components[c]) best = std::min(best, labeled.ids[u]);
        return best;
    };
    std::size_t pick = 0;
    for (std::size_t c = 1; c < decomp.count(); ++c) {
        const auto size = decomp.components[c].size(), best = decomp.components[pick].size();
        if (size > best || (size == best && min_id(c) < min_id(pick))) pick = c;
    }
    const auto& nodes = decomp.components[pick];
    LabeledGraph out;
    out.graph = labeled.graph.induced(nodes);
    for (auto u : nodes) out.ids.push_back(labeled.ids[u]);
    return out;
}

LabeledGraph largest_scc(const DirectedGraph& graph) {
    LabeledGraph labeled{graph, std::vector<std::uint64_t>(graph.node_count())};
    std::iota(labeled.ids.begin(), labeled.ids.end(), std::uint64_t{0});
    return largest_scc(labeled);
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw ConfigError("sha256 unavailable");
    std::vector<char> buffer(1 << 16);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &length);
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

// ---------------------------------------------------------------- config

namespace {

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(std::string(key) + ": expected a boolean, got \"" + std::string(v) + "\"");
}

std::size_t parse_size(std::string_view key, std::string_view v) {
    std::size_t out = 0;
    if (!parse_number(v, out)) throw ConfigError(std::string(key) + ": expected a non-negative integer");
    return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    if (!parse_number(v, out)) throw ConfigError(std::string(key) + ": expected a non-negative integer");
    return out;
}

double parse_real(std::string_view key, std::string_view v) {
    double out = 0.0;
    if (!parse_number(v, out) || !std::isfinite(out)) throw ConfigError(std::string(key) + ": expected a number");
    return out;
}

TopologySpec& topology_of(GraphSource& source) {
    if (!source.topology) source.topology.emplace();
    return *source.topology;
}

bool apply_source(GraphSource& source, std::string_view field, std::string_view key, std::string_view value) {
    if (field.empty()) {
        if (value == "dataset") {
            source.topology.reset();
            return true;
        }
        try {
            topology_of(source).family = parse_family(value);
        } catch (const Error& e) {
            throw ConfigError(std::string(key) + ": " + e.what());
        }
        return true;
    }
    if (field == "n") topology_of(source).n = parse_size(key, value);
    else if (field == "k") topology_of(source).k = parse_size(key, value);
    else if (field == "p") topology_of(source).p = parse_real(key, value);
    else if (field == "r") topology_of(source).r = parse_real(key, value);
    else if (field == "bridge") topology_of(source).bridge = parse_size(key, value);
    else if (field == "directed") topology_of(source).directed = parse_bool(key, value);
    else if (field == "lazy") source.lazy = parse_real(key, value);
    else if (field == "dataset") {
        source.dataset = std::string(value);
        source.topology.reset();
    } else if (field == "dataset-directed") source.dataset_directed = parse_bool(key, value);
    else return false;
    return true;
}

const char* const source_fields[] = {"", "n", "k", "p", "r", "bridge", "directed", "lazy", "dataset", "dataset-directed"};

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const char* side : {"agents", "topics"})
            for (const char* field : source_fields)
                k.push_back(std::string(side) + (*field ? std::string("-") + field : std::string()));
        for (const char* other : {"lambda-policy", "lambda", "lambda-file", "sweep", "from", "to", "stride",
                                  "epsilon", "seed", "trials", "output", "name", "metrics"})
            k.emplace_back(other);
        return k;
    }();
    return keys;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
    value = trim(value);
    for (auto [prefix, source] : {std::pair<std::string_view, GraphSource*>{"agents", &config.agents},
                                  std::pair<std::string_view, GraphSource*>{"topics", &config.topics}}) {
        if (key.substr(0, prefix.size()) != prefix) continue;
        auto rest = key.substr(prefix.size());
        if (!rest.empty()) {
            if (rest.front() != '-') break;
            rest.remove_prefix(1);
        }
        if (apply_source(*source, rest, key, value)) return;
        break;
    }
    if (key == "lambda-policy") {
        if (value == "oblivious") config.lambda_policy = LambdaPolicy::Oblivious;
        else if (value == "uniform") config.lambda_policy = LambdaPolicy::Uniform;
        else if (value == "file" || value == "per-agent") config.lambda_policy = LambdaPolicy::PerAgent;
        else throw ConfigError("lambda-policy: expected oblivious, uniform or file");
    } else if (key == "lambda") {
        config.lambda = parse_real(key, value);
    } else if (key == "lambda-file") {
        config.lambda_file = std::string(value);
    } else if (key == "sweep") {
        if (value == "n") config.sweep = SweepVariable::N;
        else if (value == "m") config.sweep = SweepVariable::M;
        else throw ConfigError("sweep: expected n or m");
    } else if (key == "from") {
        config.from = parse_size(key, value);
    } else if (key == "to") {
        config.to = parse_size(key, value);
    } else if (key == "stride") {
        config.stride = parse_size(key, value);
    } else if (key == "epsilon") {
        config.epsilon = parse_real(key, value);
    } else if (key == "seed") {
        config.seed = parse_u64(key, value);
    } else if (key == "trials") {
        config.trials = parse_size(key, value);
    } else if (key == "output") {
        config.output_dir = std::string(value);
    } else if (key == "name") {
        config.name = std::string(value);
    } else if (key == "metrics") {
        config.metrics.clear();
        std::string_view rest = value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            if (!item.empty()) {
                static constexpr std::string_view known[] = {"converges", "mixing", "eigen", "coupling", "limit"};
                if (std::find(std::begin(known), std::end(known), item) == std::end(known))
                    throw ConfigError("metrics: unknown metric \"" + std::string(item) + "\"");
                config.metrics.emplace_back(item);
            }
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    } else {
        throw ConfigError("unknown key \"" + std::string(key) + "\"");
    }
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = trim(line);
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = trim(body.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(config, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return parse_config(in);
}

void ExperimentConfig::validate() const {
    for (const auto* source : {&agents, &topics}) {
        const char* side = source == &agents ? "agents" : "topics";
        if (!source->topology && source->dataset.empty())
            throw ConfigError(std::string(side) + ": needs a topology or a dataset");
        if (!(source->lazy >= 0.0 && source->lazy < 1.0))
            throw ConfigError(std::string(side) + "-lazy must lie in [0, 1)");
    }
    const GraphSource& swept = sweep == SweepVariable::N ? agents : topics;
    if (!swept.topology) throw ConfigError("the swept factor must be a generated topology");
    if (from == 0 || to < from) throw ConfigError("sweep range must satisfy 1 <= from <= to");
    if (stride == 0) throw ConfigError("stride must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (trials == 0) throw ConfigError("trials must be positive");
    if (lambda_policy == LambdaPolicy::Uniform && !(lambda >= 0.0 && lambda <= 1.0))
        throw ConfigError("lambda must lie in [0, 1]");
    if (lambda_policy == LambdaPolicy::PerAgent && lambda_file.empty())
        throw ConfigError("lambda-policy = file needs lambda-file");
}

std::vector<std::size_t> ExperimentConfig::sweep_values() const {
    std::vector<std::size_t> out;
    for (std::size_t v = from; v <= to; v += stride) out.push_back(v);
    return out;
}

bool ExperimentConfig::wants(std::string_view metric) const {
    return metrics.empty() || std::find(metrics.begin(), metrics.end(), metric) != metrics.end();
}

// ---------------------------------------------------------------- experiment

namespace {

DirectedGraph build_graph(const GraphSource& source, std::optional<std::size_t> swept, std::uint64_t seed) {
    DirectedGraph graph;
    if (source.topology) {
        TopologySpec spec = *source.topology;
        if (swept) (spec.family == Family::Hypercube ? spec.k : spec.n) = *swept;
        spec.seed = seed;
        graph = generate(spec);
    } else {
        graph = largest_scc(load_edgelist(source.dataset, source.dataset_directed)).graph;
    }
    return source.lazy > 0.0 ? lazify(graph, source.lazy) : graph;
}

std::vector<double> read_lambda_file(const std::filesystem::path& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        double v = 0.0;
        if (!parse_number(std::string_view(token), v)) throw ConfigError("lambda-file: bad number \"" + token + "\"");
        out.push_back(v);
    }
    if (out.size() != n)
        throw ConfigError("lambda-file has " + std::to_string(out.size()) + " values for " + std::to_string(n) +
                          " agents");
    return out;
}

// The k starts with the largest per-start mixing time of a factor.
std::vector<std::size_t> slowest_starts(const StochasticMatrix& matrix, const Distribution& pi, double eps,
                                        std::size_t k, std::uint64_t seed) {
    StartPolicy policy;
    policy.seed = seed;
    const auto starts = policy.starts(matrix.dimension());
    const auto times = per_start_mixing_times(matrix, pi, starts, eps);
    std::vector<std::size_t> order(starts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] > times[b]; });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i) out.push_back(starts[order[i]]);
    return out;
}

}  // namespace

BeliefSystem build_system(const ExperimentConfig& config, std::optional<std::size_t> sweep_value,
                          std::uint64_t seed) {
    const bool sweep_n = config.sweep == SweepVariable::N;
    const auto ga = build_graph(config.agents, sweep_n ? sweep_value : std::nullopt, Rng::stream(seed, 0, 1)());
    const auto gc = build_graph(config.topics, sweep_n ? std::nullopt : sweep_value, Rng::stream(seed, 0, 2)());
    const std::size_t n = ga.node_count(), m = gc.node_count();
    std::vector<double> lambda(n, 1.0);
    if (config.lambda_policy == LambdaPolicy::Uniform) std::fill(lambda.begin(), lambda.end(), config.lambda);
    if (config.lambda_policy == LambdaPolicy::PerAgent) lambda = read_lambda_file(config.lambda_file, n);
    Rng rng = Rng::stream(seed, 0, 3);
    std::vector<double> x0(n * m);
    for (auto& v : x0) v = rng.uniform();
    return BeliefSystem(equal_weight_matrix(ga), equal_weight_matrix(gc), std::move(lambda), std::move(x0));
}

ExperimentRow run_point(const ExperimentConfig& config, std::optional<std::size_t> sweep_value,
                        std::uint64_t seed) {
    ExperimentRow row;
    row.sweep_value = sweep_value.value_or(0);
    auto record = [&](auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            if (row.error.empty()) row.error = e.what();
        }
    };

    std::optional<BeliefSystem> system;
    record([&] {
        system.emplace(build_system(config, sweep_value, seed));
        row.n = system->agents();
        row.m = system->topics();
    });
    if (!system) return row;
    const double eps = config.epsilon;

    if (config.wants("converges")) record([&] { row.converges = converges(*system).converges; });

    if (config.wants("mixing") || config.wants("eigen")) {
        record([&] {
            const auto& A = system->social();
            const auto& C = system->constraints();
            const auto piA = stationary(A), piC = stationary(C);
            std::vector<double> pi(row.n * row.m);
            for (std::size_t i = 0; i < row.n; ++i)
                for (std::size_t u = 0; u < row.m; ++u) pi[pair_index(i, u, row.m)] = piA[i] * piC[u];
            const auto product_pi = Distribution::trusted(std::move(pi));
            const ProductOperator op(A, C);
            if (config.wants("mixing")) {
                record([&] {
                    MixingOptions options;
                    options.epsilon = eps;
                    options.starts.seed = seed;
                    if (op.dimension() > options.starts.exact_limit) {
                        for (auto i : slowest_starts(A, piA, eps, 8, seed))
                            for (auto u : slowest_starts(C, piC, eps, 8, seed))
                                options.starts.explicit_starts.push_back(pair_index(i, u, row.m));
                    }
                    row.t_mix = static_cast<double>(measure_mixing_time(op, product_pi, options).t_mix);
                });
            }
            if (config.wants("eigen")) {
                record([&] {
                    EigenOptions options;
                    options.seed = seed;
                    const auto b = eigen_bounds(op, product_pi, eps, options);
                    row.lambda2 = b.lambda2;
                    row.lower_bound = b.lower;
                    row.upper_bound = b.upper;
                });
            }
        });
    }

    if (config.wants("coupling")) {
        record([&] {
            CouplingOptions options;
            options.trials = config.trials;
            options.seed = seed;
            const auto times = system_times(*system, options);
            const auto& worst = times.agents.coupling.mean >= times.topics.coupling.mean ? times.agents.coupling
                                                                                         : times.topics.coupling;
            row.coupling_L = worst.mean;
            row.coupling_se = worst.std_error;
            row.absorbing_H = std::max(times.agents.H, times.topics.H);
            row.theorem_bound = times.bound(eps);
        });
    }

    if (config.wants("limit")) {
        record([&] {
            const auto beliefs = structural_limit(*system).beliefs(*system);
            const auto [lo, hi] = std::minmax_element(beliefs.begin(), beliefs.end());
            if (*hi - *lo <= 1e-9) row.limit_consensus = 0.5 * (*lo + *hi);
        });
    }
    return row;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto values = config.sweep_values();
    std::vector<ExperimentRow> rows(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
        rows[i] = run_point(config, values[i], Rng::stream(config.seed, i, 0x5eed)());
    });
    return rows;
}

// ---------------------------------------------------------------- CSV / SVG

std::string_view csv_header() {
    return "sweep_value,n,m,converges,t_mix,lambda2,lower_bound,upper_bound,coupling_L,coupling_se,"
           "absorbing_H,theorem_bound,limit_consensus,error";
}

namespace {

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << csv_header() << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& r : rows) {
        out << r.sweep_value << ',' << r.n << ',' << r.m << ','
            << (r.converges ? (*r.converges ? "true" : "false") : "") << ',' << opt(r.t_mix) << ','
            << opt(r.lambda2) << ',' << opt(r.lower_bound) << ',' << opt(r.upper_bound) << ',' << opt(r.coupling_L)
            << ',' << opt(r.coupling_se) << ',' << opt(r.absorbing_H) << ',' << opt(r.theorem_bound) << ','
            << opt(r.limit_consensus) << ',' << csv_field(r.error) << '\n';
    }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, count = 0;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        count += 1.0;
    }
    const double denom = count * sxx - sx * sx;
    if (count < 2.0 || denom == 0.0) return std::nan("");
    return (count * sxy - sx * sy) / denom;
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

}  // namespace

void write_svg(std::ostream& out, std::string_view title, std::string_view x_label, std::string_view y_label,
               const std::vector<double>& x, const std::vector<double>& y) {
    constexpr double W = 640, H = 480, left = 80, right = 30, top = 50, bottom = 60;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
        if (x[i] > 0.0 && y[i] > 0.0) pts.emplace_back(std::log10(x[i]), std::log10(y[i]));

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!pts.empty()) {
        x0 = std::floor(std::min_element(pts.begin(), pts.end())->first);
        x1 = std::ceil(std::max_element(pts.begin(), pts.end())->first);
        auto by_y = [](auto& a, auto& b) { return a.second < b.second; };
        y0 = std::floor(std::min_element(pts.begin(), pts.end(), by_y)->second);
        y1 = std::ceil(std::max_element(pts.begin(), pts.end(), by_y)->second);
        if (x1 <= x0) x1 = x0 + 1;
        if (y1 <= y0) y1 = y0 + 1;
    }
    auto px = [&](double lx) { return left + (lx - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double ly) { return H - bottom - (ly - y0) / (y1 - y0) * (H - top - bottom); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
        << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
        << "\" stroke=\"black\"/>\n";
    for (double d = x0; d <= x1 + 1e-9; d += 1.0)
        out << "<line x1=\"" << fixed(px(d), 1) << "\" y1=\"" << H - bottom << "\" x2=\"" << fixed(px(d), 1)
            << "\" y2=\"" << H - bottom + 5 << "\" stroke=\"black\"/><text x=\"" << fixed(px(d), 1) << "\" y=\""
            << H - bottom + 20 << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
    for (double d = y0; d <= y1 + 1e-9; d += 1.0)
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(py(d), 1) << "\" x2=\"" << left << "\" y2=\""
            << fixed(py(d), 1) << "\" stroke=\"black\"/><text x=\"" << left - 8 << "\" y=\"" << fixed(py(d) + 4, 1)
            << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
    out << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
        << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << (top + H - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << (top + H - bottom) / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
    for (auto [lx, ly] : pts)
        out << "<circle cx=\"" << fixed(px(lx), 2) << "\" cy=\"" << fixed(py(ly), 2)
            << "\" r=\"3.5\" fill=\"steelblue\"/>\n";
    const double slope = loglog_slope(x, y);
    if (std::isfinite(slope))
        out << "<text x=\"" << W - right - 10 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">slope = "
            << fixed(slope, 3) << "</text>\n";
    out << "</svg>\n";
}

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config,
                                                 const std::vector<ExperimentRow>& rows) {
    std::filesystem::create_directories(config.output_dir);
    std::vector<std::filesystem::path> written;
    const auto csv_path = config.output_dir / (config.name + ".csv");
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + csv_path.string());
        write_csv(out, rows);
    }
    written.push_back(csv_path);

    const std::pair<const char*, std::optional<double> ExperimentRow::*> columns[] = {
        {"t_mix", &ExperimentRow::t_mix},
        {"lambda2", &ExperimentRow::lambda2},
        {"lower_bound", &ExperimentRow::lower_bound},
        {"upper_bound", &ExperimentRow::upper_bound},
        {"coupling_L", &ExperimentRow::coupling_L},
        {"absorbing_H", &ExperimentRow::absorbing_H},
        {"theorem_bound", &ExperimentRow::theorem_bound},
    };
    const char* x_label = config.sweep == SweepVariable::N ? "n (agents)" : "m (statements)";
    for (const auto& [name, member] : columns) {
        std::vector<double> xs, ys;
        for (const auto& r : rows)
            if (const auto& v = r.*member; v && *v > 0.0) {
                xs.push_back(static_cast<double>(config.sweep == SweepVariable::N ? r.n : r.m));
                ys.push_back(*v);
            }
        if (xs.size() < 2) continue;
        const auto path = config.output_dir / (config.name + "_" + name + ".svg");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path.string());
        write_svg(out, config.name + ": " + name, x_label, name, xs, ys);
        written.push_back(path);
    }
    return written;
}

// ---------------------------------------------------------------- datasets

IngestReport ingest(const std::filesystem::path& path, bool directed, std::string_view expected_sha256) {
    IngestReport report;
    report.name = path.filename().string();
    report.sha256 = sha256_file(path);
    if (!expected_sha256.empty()) {
        std::string expected(trim(expected_sha256));
        std::transform(expected.begin(), expected.end(), expected.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        report.checksum_ok = expected == report.sha256;
    }
    const auto raw = load_edgelist(path, directed);
    report.raw_nodes = raw.graph.node_count();
    report.raw_edges = raw.graph.edge_count();
    const auto scc = largest_scc(raw);
    report.scc_nodes = scc.graph.node_count();
    report.scc_edges = scc.graph.edge_count();
    return report;
}

std::string dataset_instructions() {
    return "Datasets are not bundled. Fetch them from the Stanford SNAP collection and decompress:\n"
           "\n"
           "  curl -O https://snap.stanford.edu/data/wiki-Vote.txt.gz            # directed\n"
           "  curl -O https://snap.stanford.edu/data/ca-GrQc.txt.gz              # undirected\n"
           "  curl -O https://snap.stanford.edu/data/facebook_combined.txt.gz    # undirected (ego-Facebook)\n"
           "  gunzip *.txt.gz\n"
           "\n"
           "Then record the checksum and node counts:\n"
           "\n"
           "  kronmix ingest wiki-Vote.txt --directed --sha256 <expected>\n"
           "  kronmix ingest ca-GrQc.txt --undirected\n"
           "  kronmix ingest facebook_combined.txt --undirected\n"
           "\n"
           "Edge counts are reported in walk orientation, so an undirected edge counts twice.\n";
}

}  // namespace kronmix

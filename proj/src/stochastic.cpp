#include "kronmix/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kronmix/errors.hpp"

namespace kronmix {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
    for (const auto& t : entries)
        if (t.row >= rows || t.col >= cols)
            throw DimensionMismatch("entry (" + std::to_string(t.row) + ", " +
                                    std::to_string(t.col) + ") outside " + std::to_string(rows) +
                                    "x" + std::to_string(cols));
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    offsets_.assign(rows + 1, 0);
    cols_idx_.reserve(entries.size());
    values_.reserve(entries.size());
    std::size_t k = 0;
    while (k < entries.size()) {
        const std::size_t r = entries[k].row, c = entries[k].col;
        double v = 0.0;
        for (; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k)
            v += entries[k].value;
        if (v == 0.0) continue;
        cols_idx_.push_back(c);
        values_.push_back(v);
        ++offsets_[r + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return SparseMatrix(n, n, std::move(t));
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> diag) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < diag.size(); ++i) t.push_back({i, i, diag[i]});
    return SparseMatrix(diag.size(), diag.size(), std::move(t));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
    const auto cs = row_columns(r);
    const auto it = std::lower_bound(cs.begin(), cs.end(), c);
    if (it == cs.end() || *it != c) return 0.0;
    return row_values(r)[static_cast<std::size_t>(it - cs.begin())];
}

double SparseMatrix::row_sum(std::size_t r) const {
    const auto v = row_values(r);
    return std::accumulate(v.begin(), v.end(), 0.0);
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw DimensionMismatch("multiply: vector length mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) s += values_[k] * x[cols_idx_[k]];
        y[r] = s;
    }
    return y;
}

std::vector<double> SparseMatrix::left_multiply(std::span<const double> x) const {
    std::vector<double> y(cols_, 0.0);
    left_multiply(x, y);
    return y;
}

void SparseMatrix::left_multiply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != rows_ || out.size() != cols_)
        throw DimensionMismatch("left_multiply: vector length mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) out[cols_idx_[k]] += xr * values_[k];
    }
}

SparseMatrix SparseMatrix::submatrix(std::span<const std::size_t> rows,
                                     std::span<const std::size_t> cols) const {
    constexpr auto absent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> local(cols_, absent);
    for (std::size_t k = 0; k < cols.size(); ++k) local[cols[k]] = k;
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto cs = row_columns(rows[i]);
        const auto vs = row_values(rows[i]);
        for (std::size_t k = 0; k < cs.size(); ++k)
            if (local[cs[k]] != absent) t.push_back({i, local[cs[k]], vs[k]});
    }
    return SparseMatrix(rows.size(), cols.size(), std::move(t));
}

SparseMatrix SparseMatrix::scaled_rows(std::span<const double> factors) const {
    if (factors.size() != rows_) throw DimensionMismatch("scaled_rows: factor count");
    auto t = triplets();
    for (auto& e : t) e.value *= factors[e.row];
    return SparseMatrix(rows_, cols_, std::move(t));
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) t.push_back({r, cols_idx_[k], values_[k]});
    return t;
}

std::vector<double> SparseMatrix::dense() const {
    std::vector<double> d(rows_ * cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) d[r * cols_ + cols_idx_[k]] = values_[k];
    return d;
}

void validate_stochastic(const SparseMatrix& matrix, double tol) {
    if (matrix.rows() != matrix.cols()) throw DimensionMismatch("stochastic matrix must be square");
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        for (double v : matrix.row_values(r))
            if (!(v >= 0.0) || !std::isfinite(v)) throw NotStochastic(r, "negative or non-finite entry");
        const double s = matrix.row_sum(r);
        if (std::abs(s - 1.0) > tol) throw NotStochastic(r, "row sums to " + std::to_string(s));
    }
}

namespace {

SparseMatrix renormalized(const SparseMatrix& m) {
    std::vector<double> f(m.rows(), 1.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double s = m.row_sum(r);
        if (s > 0.0 && std::abs(s - 1.0) < 1e-6) f[r] = 1.0 / s;
    }
    return m.scaled_rows(f);
}

}  // namespace

StochasticMatrix::StochasticMatrix(SparseMatrix matrix, bool renormalize)
    : matrix_(renormalize ? renormalized(matrix) : std::move(matrix)) {
    validate_stochastic(matrix_, row_tolerance);
    cumulative_.reserve(matrix_.nonzeros());
    for (std::size_t r = 0; r < matrix_.rows(); ++r) {
        double s = 0.0;
        for (double v : matrix_.row_values(r)) cumulative_.push_back(s += v);
    }
}

StochasticMatrix::StochasticMatrix(std::size_t n, std::vector<Triplet> entries, bool renormalize)
    : StochasticMatrix(SparseMatrix(n, n, std::move(entries)), renormalize) {}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
    return StochasticMatrix(SparseMatrix::identity(n));
}

StochasticMatrix StochasticMatrix::from_dense(std::size_t n, std::span<const double> rows) {
    if (rows.size() != n * n) throw DimensionMismatch("from_dense: expected n*n entries");
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rows[i * n + j] != 0.0) t.push_back({i, j, rows[i * n + j]});
    return StochasticMatrix(n, std::move(t));
}

void StochasticMatrix::apply_left(std::span<const double> v, std::span<double> out) const {
    matrix_.left_multiply(v, out);
}

std::size_t StochasticMatrix::sample_next(std::size_t state, double u) const {
    const auto cols = matrix_.row_columns(state);
    const std::size_t base = matrix_.row_begin(state);
    const auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(base);
    const auto last = first + static_cast<std::ptrdiff_t>(cols.size());
    // Scale by the row total so rows summing to 1 - 1e-12 never fall off the end.
    const double target = u * *(last - 1);
    auto it = std::upper_bound(first, last, target);
    if (it == last) --it;
    return cols[static_cast<std::size_t>(it - first)];
}

DirectedGraph StochasticMatrix::graph() const {
    std::vector<Edge> es;
    es.reserve(matrix_.nonzeros());
    for (const auto& t : matrix_.triplets())
        if (t.value > 0.0) es.push_back({t.row, t.col, t.value});
    return DirectedGraph(dimension(), std::move(es), true);
}

StochasticMatrix StochasticMatrix::restricted(std::span<const std::size_t> nodes) const {
    return StochasticMatrix(matrix_.submatrix(nodes, nodes));
}

Distribution::Distribution(std::vector<double> values) : values_(std::move(values)) {
    double s = 0.0;
    for (double v : values_) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw SpecError("distribution entries must be non-negative");
        s += v;
    }
    const double tol = std::max(mass_tolerance, static_cast<double>(values_.size()) * 1e-15);
    if (std::abs(s - 1.0) > tol) throw SpecError("distribution sums to " + std::to_string(s));
}

Distribution Distribution::uniform(std::size_t n) {
    return trusted(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(std::size_t n, std::size_t at) {
    if (at >= n) throw DimensionMismatch("point mass outside support");
    std::vector<double> v(n, 0.0);
    v[at] = 1.0;
    return trusted(std::move(v));
}

Distribution Distribution::trusted(std::vector<double> values) {
    Distribution d;
    d.values_ = std::move(values);
    return d;
}

StochasticMatrix equal_weight_matrix(const DirectedGraph& graph) {
    std::vector<Triplet> t;
    t.reserve(graph.edge_count());
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
        const auto nb = graph.out_neighbors(u);
        const auto w = graph.out_weights(u);
        double total = graph.weighted() ? std::accumulate(w.begin(), w.end(), 0.0)
                                        : static_cast<double>(nb.size());
        if (nb.empty() || total <= 0.0) throw DanglingNode(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const double v = (graph.weighted() ? w[k] : 1.0) / total;
            if (v > 0.0) t.push_back({u, nb[k], v});
        }
    }
    return StochasticMatrix(graph.node_count(), std::move(t));
}

Distribution evolve(const Distribution& dist, const TransitionOperator& op, std::size_t steps) {
    if (dist.size() != op.dimension()) throw DimensionMismatch("evolve: distribution length");
    std::vector<double> cur(dist.values().begin(), dist.values().end()), next(cur.size());
    for (std::size_t s = 0; s < steps; ++s) {
        op.apply_left(cur, next);
        cur.swap(next);
    }
    return Distribution::trusted(std::move(cur));
}

bool is_ergodic(const StochasticMatrix& matrix) {
    if (matrix.dimension() == 0) return false;
    const auto decomp = scc_decompose(matrix.graph());
    return decomp.count() == 1 && decomp.period[0] == 1;
}

Distribution stationary(const TransitionOperator& op, const StationaryOptions& options) {
    const std::size_t n = op.dimension();
    std::vector<double> cur(n, 1.0 / static_cast<double>(n)), next(n);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        op.apply_left(cur, next);
        const double mass = std::accumulate(next.begin(), next.end(), 0.0);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= mass;
            residual += std::abs(next[i] - cur[i]);
        }
        cur.swap(next);
        if (residual <= options.tolerance) return Distribution::trusted(std::move(cur));
    }
    throw FailedToConverge("stationary: residual above " + std::to_string(options.tolerance) +
                           " after " + std::to_string(options.max_iterations) + " iterations");
}

Distribution stationary(const StochasticMatrix& matrix, const StationaryOptions& options) {
    if (matrix.dimension() == 0) throw NotErgodic("empty chain");
    const auto decomp = scc_decompose(matrix.graph());
    if (decomp.count() != 1)
        throw NotErgodic("chain is reducible (" + std::to_string(decomp.count()) + " components)");
    if (decomp.period[0] != 1)
        throw NotErgodic("chain has period " + std::to_string(decomp.period[0]));
    return stationary(static_cast<const TransitionOperator&>(matrix), options);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw DimensionMismatch("tv_distance: lengths differ");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

}  // namespace kronmix

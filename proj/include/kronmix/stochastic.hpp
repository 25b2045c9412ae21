#ifndef KRONMIX_STOCHASTIC_HPP
#define KRONMIX_STOCHASTIC_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "kronmix/graph.hpp"

namespace kronmix {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// General sparse matrix, CSR, rows sorted by column. Duplicate entries are
/// summed; explicit zeros are dropped.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

    static SparseMatrix identity(std::size_t n);
    static SparseMatrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nonzeros() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_columns(std::size_t r) const {
        return {cols_idx_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
    }
    std::span<const double> row_values(std::size_t r) const {
        return {values_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
    }
    std::size_t row_begin(std::size_t r) const { return offsets_[r]; }
    double at(std::size_t r, std::size_t c) const;
    double row_sum(std::size_t r) const;

    /// y = M x
    std::vector<double> multiply(std::span<const double> x) const;
    /// y' = x' M
    std::vector<double> left_multiply(std::span<const double> x) const;
    void left_multiply(std::span<const double> x, std::span<double> out) const;

    SparseMatrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
    SparseMatrix scaled_rows(std::span<const double> factors) const;
    std::vector<Triplet> triplets() const;
    std::vector<double> dense() const;  // row-major rows x cols

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> cols_idx_;
    std::vector<double> values_;
};

/// A Markov transition kernel seen through the operations the mixing and
/// coupling code needs. Implemented by StochasticMatrix and by the implicit
/// Kronecker ProductOperator.
class TransitionOperator {
public:
    virtual ~TransitionOperator() = default;
    virtual std::size_t dimension() const = 0;
    /// out' = v' P; `out` has dimension() entries.
    virtual void apply_left(std::span<const double> v, std::span<double> out) const = 0;
    /// Next state of a walk at `state` given u uniform in [0,1).
    virtual std::size_t sample_next(std::size_t state, double u) const = 0;
};

/// Square row-stochastic sparse matrix. Rows sum to 1 within 1e-9 and every
/// entry is non-negative; the constructor enforces this.
class StochasticMatrix final : public TransitionOperator {
public:
    static constexpr double row_tolerance = 1e-9;

    StochasticMatrix() = default;
    /// Throws NotStochastic. With `renormalize`, rows off by less than 1e-6
    /// are rescaled to sum exactly to 1 before validation.
    explicit StochasticMatrix(SparseMatrix matrix, bool renormalize = false);
    StochasticMatrix(std::size_t n, std::vector<Triplet> entries, bool renormalize = false);

    static StochasticMatrix identity(std::size_t n);
    /// Dense row-major n x n input; convenient for small hand-built chains.
    static StochasticMatrix from_dense(std::size_t n, std::span<const double> rows);

    const SparseMatrix& sparse() const noexcept { return matrix_; }
    std::size_t dimension() const override { return matrix_.rows(); }
    double at(std::size_t r, std::size_t c) const { return matrix_.at(r, c); }

    void apply_left(std::span<const double> v, std::span<double> out) const override;
    std::size_t sample_next(std::size_t state, double u) const override;

    /// Edge i -> j for every positive entry (i, j).
    DirectedGraph graph() const;

    /// Restriction to a closed node set; rows of the result still sum to 1
    /// only when the set is closed, so this throws NotStochastic otherwise.
    StochasticMatrix restricted(std::span<const std::size_t> nodes) const;

private:
    SparseMatrix matrix_;
    std::vector<double> cumulative_;  // per-row prefix sums, aligned with CSR values
};

/// Dense probability vector.
class Distribution {
public:
    static constexpr double mass_tolerance = 1e-12;

    Distribution() = default;
    /// Throws SpecError if an entry is negative or the sum is off by more
    /// than max(1e-12, n * 1e-15).
    explicit Distribution(std::vector<double> values);

    static Distribution uniform(std::size_t n);
    static Distribution point_mass(std::size_t n, std::size_t at);
    /// Skips validation; for vectors produced by mass-preserving operations.
    static Distribution trusted(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Equal weights over out-neighbours: entry (i, j) = 1/outdeg(i). Weighted
/// graphs (e.g. from lazify) are row-normalised by their weights instead.
/// Throws DanglingNode for a node without out-edges.
StochasticMatrix equal_weight_matrix(const DirectedGraph& graph);

/// Throws NotStochastic naming the first offending row; passes silently.
void validate_stochastic(const SparseMatrix& matrix, double tol = StochasticMatrix::row_tolerance);

/// v' P^steps.
Distribution evolve(const Distribution& dist, const TransitionOperator& op, std::size_t steps);

struct StationaryOptions {
    double tolerance = 1e-12;          // on ||pi' P - pi'||_1
    std::size_t max_iterations = 10'000'000;
};

/// Stationary distribution of an irreducible aperiodic chain by left power
/// iteration from the uniform vector. Throws NotErgodic when the chain is
/// reducible or periodic, FailedToConverge when the cap is hit.
Distribution stationary(const StochasticMatrix& matrix, const StationaryOptions& options = {});

/// Same iteration for operators with no graph available (e.g. an implicit
/// Kronecker product); ergodicity is the caller's responsibility.
Distribution stationary(const TransitionOperator& op, const StationaryOptions& options = {});

/// Half the L1 distance. Throws DimensionMismatch.
double tv_distance(std::span<const double> p, std::span<const double> q);
inline double tv_distance(const Distribution& p, const Distribution& q) {
    return tv_distance(p.values(), q.values());
}

/// Irreducible and aperiodic, decided on the support graph.
bool is_ergodic(const StochasticMatrix& matrix);

}  // namespace kronmix

#endif  // KRONMIX_STOCHASTIC_HPP

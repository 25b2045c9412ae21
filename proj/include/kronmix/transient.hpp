#ifndef KRONMIX_TRANSIENT_HPP
#define KRONMIX_TRANSIENT_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "kronmix/stochastic.hpp"

namespace kronmix {

/// Factorization of I - Z for a substochastic transient block Z. Applying
/// solve() is multiplication by the fundamental matrix N = (I - Z)^-1.
///
/// Blocks up to `direct_limit` states use a sparse LU factorization; larger
/// ones use preconditioned BiCGSTAB. N is never formed densely.
class TransientSolver {
public:
    static constexpr std::size_t direct_limit = 2000;

    /// Throws StructuralError when I - Z is singular (a closed class was
    /// classified as transient).
    explicit TransientSolver(const SparseMatrix& Z);
    ~TransientSolver();
    TransientSolver(TransientSolver&&) noexcept;
    TransientSolver& operator=(TransientSolver&&) noexcept;

    std::size_t dimension() const noexcept { return dimension_; }
    bool direct() const noexcept { return dimension_ <= direct_limit; }

    std::vector<double> solve(std::span<const double> rhs) const;

private:
    struct Impl;
    std::size_t dimension_ = 0;
    std::unique_ptr<Impl> impl_;
};

}  // namespace kronmix

#endif  // KRONMIX_TRANSIENT_HPP

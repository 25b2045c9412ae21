#include "kronmix/transient.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <string>

#include "kronmix/errors.hpp"

namespace kronmix {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct TransientSolver::Impl {
    EigenSparse system;
    Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
    Eigen::BiCGSTAB<EigenSparse, Eigen::IncompleteLUT<double>> iterative;
};

TransientSolver::TransientSolver(const SparseMatrix& Z)
    : dimension_(Z.rows()), impl_(std::make_unique<Impl>()) {
    if (Z.rows() != Z.cols()) throw DimensionMismatch("transient block must be square");
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(Z.nonzeros() + Z.rows());
    for (std::size_t i = 0; i < Z.rows(); ++i) t.emplace_back(int(i), int(i), 1.0);
    for (const auto& e : Z.triplets()) t.emplace_back(int(e.row), int(e.col), -e.value);
    impl_->system.resize(int(Z.rows()), int(Z.cols()));
    impl_->system.setFromTriplets(t.begin(), t.end());
    impl_->system.makeCompressed();
    if (dimension_ == 0) return;

    if (direct()) {
        impl_->lu.compute(impl_->system);
        if (impl_->lu.info() != Eigen::Success)
            throw StructuralError("I - Z is singular: " + impl_->lu.lastErrorMessage());
        // SparseLU may accept numerically singular systems; check the diagonal of U.
        if (!std::isfinite(impl_->lu.logAbsDeterminant()))
            throw StructuralError("I - Z is singular");
    } else {
        impl_->iterative.setTolerance(1e-14);
        impl_->iterative.setMaxIterations(20000);
        impl_->iterative.preconditioner().setDroptol(1e-6);
        impl_->iterative.compute(impl_->system);
        if (impl_->iterative.info() != Eigen::Success)
            throw StructuralError("I - Z preconditioner failed");
    }
}

TransientSolver::~TransientSolver() = default;
TransientSolver::TransientSolver(TransientSolver&&) noexcept = default;
TransientSolver& TransientSolver::operator=(TransientSolver&&) noexcept = default;

std::vector<double> TransientSolver::solve(std::span<const double> rhs) const {
    if (rhs.size() != dimension_) throw DimensionMismatch("transient solve: rhs length");
    if (dimension_ == 0) return {};
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), Eigen::Index(rhs.size()));
    Eigen::VectorXd x;
    if (direct()) {
        x = impl_->lu.solve(b);
        if (impl_->lu.info() != Eigen::Success) throw StructuralError("transient solve failed");
    } else {
        x = impl_->iterative.solve(b);
        if (impl_->iterative.info() != Eigen::Success)
            throw StructuralError("transient iterative solve did not converge (error " +
                                  std::to_string(impl_->iterative.error()) + ")");
    }
    if (!x.allFinite() || (impl_->system * x - b).norm() > 1e-8 * (1.0 + b.norm()))
        throw StructuralError("I - Z is singular");
    return {x.data(), x.data() + x.size()};
}

}  // namespace kronmix

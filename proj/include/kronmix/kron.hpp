#ifndef KRONMIX_KRON_HPP
#define KRONMIX_KRON_HPP

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "kronmix/graph.hpp"
#include "kronmix/stochastic.hpp"

namespace kronmix {

/// Stacked pair index used everywhere: (i, u) -> i * m + u.
constexpr std::size_t pair_index(std::size_t i, std::size_t u, std::size_t m) { return i * m + u; }

inline constexpr std::size_t default_materialize_cap = 10'000'000;

/// Implicit left (x) right. Never stores the nm x nm product.
class ProductOperator final : public TransitionOperator {
public:
    ProductOperator(StochasticMatrix left, StochasticMatrix right);

    const StochasticMatrix& left() const noexcept { return left_; }
    const StochasticMatrix& right() const noexcept { return right_; }
    std::size_t dimension() const override { return left_.dimension() * right_.dimension(); }
    std::size_t nonzeros() const { return left_.sparse().nonzeros() * right_.sparse().nonzeros(); }

    /// Entry ((i,u),(j,v)) = left(i,j) * right(u,v).
    double at(std::size_t row, std::size_t col) const;

    void apply_left(std::span<const double> v, std::span<double> out) const override;
    std::size_t sample_next(std::size_t state, double u) const override;

    StochasticMatrix materialize(std::size_t cap = default_materialize_cap) const;

private:
    StochasticMatrix left_, right_;
};

/// Sparse Kronecker product of general (possibly substochastic) matrices.
/// Throws TooLarge when the product would exceed `cap` nonzeros.
SparseMatrix kron(const SparseMatrix& left, const SparseMatrix& right,
                  std::size_t cap = default_materialize_cap);

/// With `materialize`, an explicit StochasticMatrix (TooLarge above `cap`
/// nonzeros); otherwise the implicit ProductOperator.
std::variant<StochasticMatrix, ProductOperator> kron(const StochasticMatrix& left,
                                                     const StochasticMatrix& right, bool materialize,
                                                     std::size_t cap = default_materialize_cap);

/// (u,u') -> (v,v') iff u -> v in g1 and u' -> v' in g2.
DirectedGraph kron_graph(const DirectedGraph& g1, const DirectedGraph& g2);

struct ProductSccReport {
    std::size_t product_components = 0;
    /// Filled when both factors are strongly connected and have at least one edge.
    bool factors_strongly_connected = false;
    std::size_t expected_components = 0;  // gcd(d1, d2)
    std::size_t expected_period = 0;      // lcm(d1, d2)
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// Checks the product SCC structure: every product component lies inside
/// S1 x S2 for exactly one pair of factor components, and for strongly
/// connected factors with periods d1, d2 the product has gcd(d1,d2)
/// components of period lcm(d1,d2) each.
ProductSccReport product_scc_check(const DirectedGraph& g1, const DirectedGraph& g2,
                                   const SccDecomposition& product_decomp);

}  // namespace kronmix

#endif  // KRONMIX_KRON_HPP

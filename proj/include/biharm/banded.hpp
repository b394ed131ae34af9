/**
 * @file banded.hpp
 * @brief Symmetric pentadiagonal matrices and their LDL^T factorisation.
 *
 * The factorisation is a congruence, so the signs of the pivots give the
 * inertia of the matrix (Sylvester). The eigen solvers use the count of
 * negative pivots to certify that a shift lies below the spectrum.
 */
#ifndef BIHARM_BANDED_HPP
#define BIHARM_BANDED_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace biharm {

struct SymmetricPentadiagonal {
    std::vector<double> diag;  ///< S_ii
    std::vector<double> off1;  ///< S_{i,i+1}, last entry unused
    std::vector<double> off2;  ///< S_{i,i+2}, last two entries unused

    explicit SymmetricPentadiagonal(std::size_t n = 0) : diag(n, 0.0), off1(n, 0.0), off2(n, 0.0) {}
    std::size_t size() const { return diag.size(); }

    std::vector<double> multiply(std::span<const double> x) const;
};

class PentadiagonalLdlt {
public:
    explicit PentadiagonalLdlt(const SymmetricPentadiagonal& s);

    /// False if a pivot vanished (relative to the diagonal) or was non-finite.
    bool complete() const { return complete_; }
    std::size_t negative_pivots() const { return negative_; }
    bool positive_definite() const { return complete_ && negative_ == 0; }

    std::vector<double> solve(std::span<const double> rhs) const;

private:
    std::vector<double> d_, l1_, l2_;
    std::size_t negative_ = 0;
    bool complete_ = true;
};

}  // namespace biharm

#endif  // BIHARM_BANDED_HPP

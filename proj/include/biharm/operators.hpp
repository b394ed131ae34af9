/**
 * @file operators.hpp
 * @brief Radial Dirichlet Laplacian and the Navier-split bilaplacian.
 *
 * -Delta u = -r^{1-N} (r^{N-1} u')' is discretised in flux form with faces
 * at r_{i+1/2} = i h. The face at r = 0 carries r^{N-1} = 0, so no ghost
 * value is needed there; u(R) = 0 is imposed by the ghost value
 * u_{M+1} = -u_M. The resulting matrix A is an M-matrix and W A is
 * symmetric for W = diag(w_i), the quadrature weights of the grid.
 *
 * Under Navier conditions u = 0 = Delta u on the boundary,
 * Delta^2 u = h splits into -Delta w = h, -Delta u = w, both Dirichlet.
 */
#ifndef BIHARM_OPERATORS_HPP
#define BIHARM_OPERATORS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/radial_mesh.hpp"

namespace biharm {

/// Tridiagonal elimination hit a non-positive pivot. Cannot happen for an
/// assembled M-matrix; signals corrupted input.
class SolverBreakdown : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NegLaplacianMatrix {
public:
    explicit NegLaplacianMatrix(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return diag_.size(); }

    /// Coefficient of u_{i-1} in row i (sub[0] == 0).
    const std::vector<double>& sub() const { return sub_; }
    const std::vector<double>& diag() const { return diag_; }
    /// Coefficient of u_{i+1} in row i (sup[M-1] == 0).
    const std::vector<double>& sup() const { return sup_; }

    FieldVector apply(const FieldVector& u) const;
    FieldVector solve(const FieldVector& rhs) const;

    /// Componentwise backward error max_i |A x - b|_i / (|A||x| + |b|)_i.
    double backward_error(const FieldVector& x, const FieldVector& rhs) const;

    struct MMatrixCheck {
        bool positive_diagonal = true;
        bool nonpositive_offdiagonal = true;
        bool diagonally_dominant = true;
        bool strictly_dominant_row = false;
        std::optional<std::size_t> first_bad_row;
        bool ok() const {
            return positive_diagonal && nonpositive_offdiagonal && diagonally_dominant && strictly_dominant_row;
        }
    };
    /// Row-by-row check of the irreducibly diagonally dominant M-matrix structure.
    MMatrixCheck check_m_matrix() const;

private:
    GridPtr grid_;
    std::vector<double> sub_, diag_, sup_;
    // Thomas factorisation, computed once.
    std::vector<double> pivot_, upper_;
};

NegLaplacianMatrix assemble_neg_laplacian(GridPtr grid);
FieldVector solve_dirichlet(const NegLaplacianMatrix& a, const FieldVector& rhs);

struct BiharmonicSolution {
    FieldVector u;  ///< solution
    FieldVector w;  ///< w = -Delta_h u
};

class NavierBiharmonicOperator {
public:
    explicit NavierBiharmonicOperator(GridPtr grid);
    explicit NavierBiharmonicOperator(NegLaplacianMatrix a);

    const GridPtr& grid() const { return laplacian_.grid(); }
    const NegLaplacianMatrix& laplacian() const { return laplacian_; }

    BiharmonicSolution solve(const FieldVector& rhs) const;
    FieldVector apply(const FieldVector& u) const;
    /// Delta_h u (note the sign: equals -A u).
    FieldVector laplacian_of(const FieldVector& u) const;

private:
    NegLaplacianMatrix laplacian_;
};

BiharmonicSolution solve_biharmonic_navier(const NavierBiharmonicOperator& b, const FieldVector& rhs);
FieldVector apply_bilaplacian(const NavierBiharmonicOperator& b, const FieldVector& u);

/// || Delta_h u ||_{L^2_w}
double discrete_h2_seminorm(const RadialGrid& g, const FieldVector& u);
double discrete_h2_seminorm(const NavierBiharmonicOperator& b, const FieldVector& u);

/// Outcome of a discrete comparison-principle check.
struct OrderingCertificate {
    bool rhs_ordered = false;   ///< rhs1 >= rhs2 componentwise
    bool rhs_equal = false;
    bool u_ordered = false;     ///< u1 >= u2 - slack
    bool w_ordered = false;     ///< w1 >= w2 - slack
    bool equal = false;         ///< u1 == u2 and w1 == w2 up to slack
    double slack = 0.0;
    double min_u_gap = 0.0;     ///< min_i (u1 - u2)_i / scale
    double min_w_gap = 0.0;
    std::optional<std::size_t> first_violation;
    std::string violating_field;  ///< "u", "w" or empty

    /// rhs ordering implied solution ordering.
    bool holds() const { return !rhs_ordered || (u_ordered && w_ordered); }
};

/// Raised when a pair (u, rhs) handed to compare() is not a discrete solution.
class NotASolution : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Certifies u1 >= u2 and -Delta_h u1 >= -Delta_h u2 whenever rhs1 >= rhs2.
 * Each u_k must solve Delta_h^2 u_k = rhs_k (checked in inverse form to
 * 1e-8 relative). Slack is 1e-10 on fields normalised by their common sup.
 */
OrderingCertificate compare(const NavierBiharmonicOperator& b, const FieldVector& u1, const FieldVector& u2,
                            const FieldVector& rhs1, const FieldVector& rhs2);

}  // namespace biharm

#endif  // BIHARM_OPERATORS_HPP

/**
 * @file eigen.hpp
 * @brief Smallest eigenpairs of the weighted pencil (Delta_h^2 - P) v = sigma Q v.
 *
 * P and Q are diagonal (sampled on the grid), Q > 0. In the quadrature
 * inner product the pencil is symmetric, so shifted inverse iteration with
 * Rayleigh quotients converges to the bottom of the spectrum. Every shift
 * is certified by the inertia of an LDL^T factorisation before use.
 */
#ifndef BIHARM_EIGEN_HPP
#define BIHARM_EIGEN_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/banded.hpp"
#include "biharm/operators.hpp"

namespace biharm {

struct SpectralEstimate {
    double eigenvalue = 0.0;
    /// Normalised in the weighted L^2 norm, positive at the innermost node.
    FieldVector eigenvector;
    /// Preconditioned defect || v - L^{-1} (P + sigma Q) v ||_w / || v ||_w,
    /// with L^{-1} the Navier split solve.
    double residual = 0.0;
    int iterations = 0;
    /// residual <= residual_tol. A settled eigenvalue whose residual stalled
    /// above the tolerance is still returned, uncertified.
    bool certified = false;
    std::vector<double> shift_history;
    /// Second eigenvalue (deflated iteration), when requested.
    std::optional<double> second_eigenvalue;
};

/// Factorisation kept failing after every shift retreat, or no convergence.
class EigenError : public std::runtime_error {
public:
    EigenError(const std::string& what, std::vector<double> shifts)
        : std::runtime_error(what), shift_history(std::move(shifts)) {}
    std::vector<double> shift_history;
};

struct EigenOptions {
    double initial_shift = 0.0;
    double rel_tol = 1e-10;       ///< successive Rayleigh quotients
    double residual_tol = 1e-8;
    /// Absolute scale used instead of |sigma| when sigma is near zero.
    double abs_scale = 1.0;
    int max_iter = 2000;
    int max_shift_retries = 60;
    /// Split-solve refinement steps once the Rayleigh quotient has settled.
    int max_polish = 50;
    bool compute_second = false;
};

/// (Delta_h^2 - P) v = sigma Q v; pass an empty mass for Q = I.
class WeightedPencil {
public:
    WeightedPencil(const NavierBiharmonicOperator& op, FieldVector potential, std::optional<FieldVector> mass = {});

    const NavierBiharmonicOperator& op() const { return *op_; }
    const FieldVector& potential() const { return potential_; }
    const FieldVector& mass() const { return mass_; }

    /// (||A v||^2 - <P v, v>) / <Q v, v>, all in the weighted inner product.
    double rayleigh_quotient(const FieldVector& v) const;

    /// || v - L^{-1} (P + sigma Q) v ||_w / || v ||_w.
    double residual(const FieldVector& v, double sigma) const;

    /// W^{-1/2} W (L - P - s Q) W^{-1/2}, symmetric pentadiagonal.
    SymmetricPentadiagonal shifted_matrix(double shift) const;

private:
    const NavierBiharmonicOperator* op_;
    FieldVector potential_;
    FieldVector mass_;
};

SpectralEstimate smallest_eigenpair(const WeightedPencil& pencil, const EigenOptions& options);

}  // namespace biharm

#endif  // BIHARM_EIGEN_HPP

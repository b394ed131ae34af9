/**
 * @file stability.hpp
 * @brief First eigenvalue of the linearisation Delta^2 - mu a - c f'(u),
 *        the energy identity, and multistart consistency of minimal solutions.
 */
#ifndef BIHARM_STABILITY_HPP
#define BIHARM_STABILITY_HPP

#include <vector>

#include "biharm/eigen.hpp"
#include "biharm/monotone_solver.hpp"

namespace biharm {

/// Diagonal potential mu a + c f'(u) of the linearised operator.
FieldVector linearized_potential(const ProblemSpec& spec, const FieldVector& u);

/// Smallest eigenvalue of (Delta_h^2 - mu a - c f'(u)) v = sigma v. Starts
/// from the shift -|| mu a + c f'(u) ||_inf; retreats on factorisation failure.
SpectralEstimate linearized_first_eigen(const ProblemSpec& spec, const FieldVector& u, bool compute_second = false);

/// (||Delta_h phi||^2 - <(mu a + c f'(u)) phi, phi>) / ||phi||^2
double stability_quotient(const ProblemSpec& spec, const FieldVector& u, const FieldVector& phi);

struct StabilityRow {
    double lambda = 0.0;
    Outcome solve_outcome = Outcome::Inconclusive;
    double eigenvalue = 0.0;
    double residual = 0.0;
};

struct StabilitySweep {
    std::vector<StabilityRow> rows;
    bool all_stable = true;     ///< every eigenvalue >= -1e-6
    bool nonincreasing = true;  ///< eigenvalues nonincreasing within 1e-6
    /// lambdas whose eigenvalue fell below -1e-6 (a coarse-grid discrepancy).
    std::vector<double> discrepancies;
    /// lambdas whose minimal solve did not converge.
    std::vector<double> unsolved;
};

/// lambda_k = top * lambda_minus * k / count, k = 1..count.
std::vector<double> stability_ladder(double lambda_minus, int count = 10, double top = 0.95);

StabilitySweep stability_sweep(const ProblemSpec& tmpl, const std::vector<double>& ladder,
                               const IterationControls& controls = {});

struct TruncatedStabilityRow {
    double level = 0.0;
    double eigenvalue = 0.0;
};
/// Linearised eigenvalues at the minimal solutions of the truncated problems.
std::vector<TruncatedStabilityRow> truncated_stability(const ProblemSpec& tmpl, const std::vector<double>& levels,
                                                       const IterationControls& controls = {});

struct EpsilonPair {
    double epsilon = 0.0;
    /// sup_s ((1 + eps) f(s) s - f'(s) s^2), sampled on s in [1e-6, 1e6].
    double constant = 0.0;
};

struct EnergyReport {
    double stiffness = 0.0;        ///< ||Delta_h u||^2
    double potential_term = 0.0;   ///< mu int a u^2
    double nonlinear_term = 0.0;   ///< int c f(u) u
    double source_term = 0.0;      ///< lambda int b u
    double linearized_term = 0.0;  ///< int c f'(u) u^2
    double identity_defect = 0.0;  ///< relative
    bool identity_holds = false;   ///< identity_defect <= 1e-8
    bool stability_inequality = false;  ///< linearized_term <= stiffness - potential_term (1e-8 rel.)
    std::vector<EpsilonPair> pairs;
};

/// Tests the equation with phi = u; reports (eps, C) pairs for
/// (1 + eps) f(s) s <= f'(s) s^2 + C at eps in {0.1, 0.5, 1}.
EnergyReport energy_identity_check(const ProblemSpec& spec, const FieldVector& u);

struct MultistartCheck {
    IterationReport baseline;
    std::vector<double> factors;
    std::vector<Outcome> outcomes;
    std::vector<double> differences;  ///< sup |u_start - u_baseline| / sup u_baseline
    bool consistent = false;          ///< every restart converged within 1e-8
};

/// Restarts the minimal iteration from factor * (Delta^2)^{-1}(lambda b).
MultistartCheck multistart_consistency(const ProblemSpec& spec, const IterationControls& controls = {},
                                       std::vector<double> factors = {0.9, 1.1});

}  // namespace biharm

#endif  // BIHARM_STABILITY_HPP

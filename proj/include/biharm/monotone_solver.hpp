/**
 * @file monotone_solver.hpp
 * @brief Monotone fixed-point iterations for zeta_1 = G(b) and for the
 *        minimal solution of  Delta^2 u - mu a u = c f(u) + lambda b.
 *
 * Every step is one Navier split solve  Delta_h^2 u_{k+1} = F(u_k)  with
 * F(u) = mu a u + c f(u) + h. Starting from below, the iterates increase
 * componentwise (discrete comparison principle), so the limit, when it
 * exists, is the minimal nonnegative solution.
 */
#ifndef BIHARM_MONOTONE_SOLVER_HPP
#define BIHARM_MONOTONE_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/operators.hpp"
#include "biharm/problem_model.hpp"

namespace biharm {

struct IterationControls {
    int max_iter = 100000;
    double rel_tol = 1e-10;  ///< relative sup-norm change
    double u_cap = 1e8;      ///< divergence when sup u_k > u_cap * sup u_0
    int stall_window = 10;   ///< steps of nondecreasing sup required for divergence
    int streak = 3;          ///< consecutive small steps required for convergence

    /// Throws std::invalid_argument unless rel_tol > 0, u_cap > 0, max_iter >= 2.
    void validate() const;
};

enum class Outcome { Converged, Diverged, Inconclusive };
std::string to_string(Outcome o);

struct IterationReport {
    Outcome outcome = Outcome::Inconclusive;
    int iterations = 0;
    std::vector<double> sup_norms;     ///< sup u_k, k = 0, 1, ...
    std::vector<double> h2_seminorms;  ///< || Delta_h u_k ||
    /// rho_k = || Delta_h (u_{k+1} - u_k) || / || Delta_h (u_k - u_{k-1}) ||,
    /// with u_{-1} = 0; steps at the round-off floor are skipped.
    std::vector<double> ratios;
    bool monotone = true;              ///< u_{k+1} >= u_k - 1e-12 sup at every step
    double min_increment = 0.0;        ///< min_k min_i (u_{k+1} - u_k)_i / sup u_{k+1}
    FieldVector u;                     ///< last iterate
    FieldVector w;                     ///< -Delta_h u
    /// || F(u_{k-1}) - F(u_k) ||_w / || h ||_w, the defect of the last iterate.
    double residual = 0.0;
    std::string note;

    bool converged() const { return outcome == Outcome::Converged; }
    double max_ratio() const;
};

/// A solve that had to converge (Green operator) did not.
class IterationFailure : public std::runtime_error {
public:
    IterationFailure(const std::string& what, IterationReport rep)
        : std::runtime_error(what), report(std::move(rep)) {}
    IterationReport report;
};

/// zeta_1 = G(b): iteration Delta^2 u_k = mu a u_{k-1} + b. Divergence is
/// reported as Inconclusive (it can only mean gamma_hat was overestimated).
IterationReport solve_zeta1(const ProblemSpec& spec, const IterationControls& controls = {});

/// Minimal nonnegative fixed point of u = (Delta^2)^{-1}(mu a u + h), h >= 0.
/// Throws IterationFailure if the iteration does not converge.
FieldVector apply_green(const ProblemSpec& spec, const FieldVector& h, const IterationControls& controls = {});

struct SolveOptions {
    /// Starting iterate; defaults to (Delta^2)^{-1}(lambda b).
    std::optional<FieldVector> start;
};

/// Minimal solution of the full problem (after the admissibility gate).
IterationReport solve_minimal(const ProblemSpec& spec, const IterationControls& controls = {},
                              const SolveOptions& options = {});

struct EpsilonBound {
    double epsilon = 0.0;
    bool l2_finite = false;
    /// Smallest C with G(c f(eps zeta_1)) <= C zeta_1 on the grid.
    double constant = 0.0;
};

struct ExistenceVerdict {
    bool l2_finite = false;  ///< c f(2 lambda zeta_1) has a finite weighted L^2 norm
    /// G(c f(2 lambda zeta_1)) <= lambda zeta_1 componentwise.
    bool holds = false;
    /// max_i G(c f(2 lambda zeta_1))_i / (lambda zeta_1)_i
    double margin = 0.0;
    std::optional<std::size_t> witness;
    std::vector<EpsilonBound> epsilon_bounds;
    std::optional<EpsilonBound> best;  ///< smallest C over the epsilon grid
};

/// Sufficient test for existence at spec.lambda. The epsilon grid defaults
/// to {2 lambda, 1, 10}.
ExistenceVerdict check_existence_condition(const ProblemSpec& spec, const FieldVector& zeta1,
                                           const IterationControls& controls = {},
                                           std::vector<double> epsilon_grid = {});

struct MinimalityVerdict {
    /// Candidate passes w >= (Delta^2)^{-1} F(w) - tol.
    bool supersolution = false;
    double supersolution_defect = 0.0;  ///< min_i (w - (Delta^2)^{-1} F(w))_i / sup w
    /// u <= w + tol; evaluated only for supersolutions.
    std::optional<bool> bounded;
    double min_gap = 0.0;  ///< min_i (w - u)_i / sup w
    std::optional<std::size_t> witness;
};

/// Order-form supersolution test followed by u <= w. tol = 1e-8 sup w.
MinimalityVerdict check_minimality(const ProblemSpec& spec, const FieldVector& u, const FieldVector& candidate);

struct SandwichCheck {
    bool lower = false;  ///< u >= lambda zeta_1 - slack
    bool upper = false;  ///< u <= 2 lambda zeta_1 + slack
    double lower_gap = 0.0;  ///< min_i (u - lambda zeta_1)_i / sup(lambda zeta_1)
    double upper_gap = 0.0;  ///< min_i (2 lambda zeta_1 - u)_i / sup(lambda zeta_1)
    bool holds() const { return lower && upper; }
};

/// Slack is relative to sup(lambda zeta_1).
SandwichCheck check_sandwich(const FieldVector& u, const FieldVector& zeta1, double lambda, double slack = 1e-9);

/// Largest lambda_0 = start / 2^j (j <= 60) at which the minimal solution
/// converges and satisfies the sandwich.
std::optional<double> find_sandwich_threshold(const ProblemSpec& spec, const FieldVector& zeta1, double start,
                                              const IterationControls& controls = {});

/// Weighted L^2 residual of the weak form tested against `count` fixed
/// pseudo-random fields: max over tests of
/// |<Delta u, Delta phi> - <F(u), phi>| / (||Delta u|| ||Delta phi|| + ||F(u)|| ||phi||).
double weak_form_defect(const ProblemSpec& spec, const FieldVector& u, int count = 20, std::uint64_t seed = 20240607);

/// F(u) = mu a u + c f(u) + lambda b on the grid.
FieldVector nonlinear_rhs(const ProblemSpec& spec, const SampledProblem& data, const FieldVector& u);

}  // namespace biharm

#endif  // BIHARM_MONOTONE_SOLVER_HPP

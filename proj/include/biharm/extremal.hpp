/**
 * @file extremal.hpp
 * @brief Bracketing of the extremal parameter, continuation toward the
 *        extremal solution, complete blow-up probes and the weak-solution
 *        threshold bound.
 */
#ifndef BIHARM_EXTREMAL_HPP
#define BIHARM_EXTREMAL_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/monotone_solver.hpp"

namespace biharm {

struct BracketEntry {
    double lambda = 0.0;
    Outcome outcome = Outcome::Inconclusive;
    int iterations = 0;
};

struct LambdaBracket {
    double lambda_minus = 0.0;  ///< largest tested lambda that converged
    double lambda_plus = 0.0;   ///< smallest tested lambda that did not converge
    /// False if lambda_plus is an Inconclusive verdict rather than a divergence.
    bool plus_diverged = true;
    std::vector<BracketEntry> history;

    double midpoint() const { return 0.5 * (lambda_minus + lambda_plus); }
    double relative_width() const { return (lambda_plus - lambda_minus) / lambda_minus; }
    std::size_t inconclusive_count() const;
    /// No Converged verdict above a Diverged one anywhere in the history.
    bool consistent() const;
};

struct BisectionControls {
    double rel_width = 1e-3;
    double lambda_hi_max = 1e12;
    double lambda_lo_min = 1e-12;
    int max_steps = 200;
};

/// Divergence never observed up to lambda_hi_max.
class NoUpperBound : public std::runtime_error {
public:
    NoUpperBound(const std::string& what, std::vector<BracketEntry> h)
        : std::runtime_error(what), history(std::move(h)) {}
    std::vector<BracketEntry> history;
};

/// Convergence never observed down to lambda_lo_min.
class NoLowerBound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Widens [lo, hi] by factors of 10 until lo converges and hi diverges, then
 * bisects (geometrically while hi / lo > 4). Inconclusive verdicts count as
 * "not converged" and are kept in the history.
 */
LambdaBracket bracket_lambda_star(const ProblemSpec& tmpl, double lambda_lo, double lambda_hi,
                                  const BisectionControls& bisection = {}, const IterationControls& controls = {});

struct ExtremalTrace {
    std::vector<double> lambdas;
    std::vector<double> seminorms;       ///< || Delta_h u_{lambda_j} ||
    std::vector<double> l2_differences;  ///< || u_{lambda_{j+1}} - u_{lambda_j} ||_w
    std::vector<FieldVector> solutions;
    FieldVector u_star;                  ///< top of the ladder
    Outcome outcome = Outcome::Converged;
    /// Verdict of the s f'(s)/f(s) > 1 hypothesis for the nonlinearity.
    Verdict growth_condition = Verdict::Inconclusive;
    std::string note;

    double seminorm_spread() const;  ///< max / min of the seminorm trace
    /// Differences strictly decreasing over the last `steps` entries.
    bool cauchy_tail(std::size_t steps) const;
};

/// Ladder lambda_minus (1 - 2^{-j}), j = 1..steps.
std::vector<double> extremal_ladder(double lambda_minus, int steps = 10);

/// Solves along the ladder; Inconclusive if a rung fails to converge or the
/// seminorm exceeds 10x its first value.
ExtremalTrace continue_to_extremal(const ProblemSpec& tmpl, const std::vector<double>& ladder,
                                   const IterationControls& controls = {});
ExtremalTrace continue_to_extremal(const ProblemSpec& tmpl, const LambdaBracket& bracket, int steps = 10,
                                   const IterationControls& controls = {});

enum class BlowUpVerdict { BlowUpSignature, Bounded, Inconclusive };
std::string to_string(BlowUpVerdict v);

struct BlowUpTrace {
    double lambda = 0.0;
    std::vector<double> levels;
    std::vector<double> interior_min;  ///< min of u_n over r <= R/2
    std::vector<double> sup_norms;
    std::vector<int> iterations;
    /// u_n <= u_{n+1} (1e-10 relative slack) for consecutive levels.
    bool monotone_in_n = true;
    /// || u_n - u_lambda ||_w / || u_lambda ||_w when the untruncated problem converges.
    std::vector<double> distance_to_untruncated;
    BlowUpVerdict verdict = BlowUpVerdict::Inconclusive;
    std::string note;
};

/// Solves the truncated problems for each level (optionally in parallel).
/// Throws IterationFailure if a truncated solve does not converge.
BlowUpTrace blow_up_probe(const ProblemSpec& tmpl, double lambda, const std::vector<double>& levels,
                          const IterationControls& controls = {}, bool parallel = false);

/// sup_{t >= 0} (t - eps f(t)); infinity if unbounded.
double young_constant(const Nonlinearity& f, double epsilon);

struct TildeRow {
    std::string test;    ///< name of the test density psi
    double k = 0.0;      ///< max psi / (c phi)
    double epsilon = 0.0;
    double c_epsilon = 0.0;
    double bound = 0.0;  ///< C_eps int psi / int b phi
};

struct LambdaTildeReport {
    bool applicable = false;
    std::string note;
    std::vector<TildeRow> rows;
    double lambda_tilde_plus = 0.0;  ///< min over rows
};

/**
 * Upper bound for any discrete solution parameter. Pairs the equation with
 * phi = (Delta_h^2)^{-1} psi for test densities psi >= 0, uses
 * u <= C_eps + eps f(u) with eps = theta / K, theta in `fractions`
 * (default {1, 0.5, 0.25, 0.1}).
 */
LambdaTildeReport lambda_tilde_diagnostic(const ProblemSpec& spec, std::vector<double> fractions = {});

}  // namespace biharm

#endif  // BIHARM_EXTREMAL_HPP

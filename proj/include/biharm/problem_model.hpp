/**
 * @file problem_model.hpp
 * @brief Data of the semilinear problem  Delta^2 u - mu a u = c f(u) + lambda b
 *        and the structural hypotheses the existence theory rests on.
 */
#ifndef BIHARM_PROBLEM_MODEL_HPP
#define BIHARM_PROBLEM_MODEL_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/eigen.hpp"
#include "biharm/radial_mesh.hpp"

namespace biharm {

/// A hypothesis required before numerics (e.g. mu < sqrt(gamma)) fails.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Nonnegative radial function used for the potential a, the source b and
 * the optional coefficient c. An optional cap n turns it into min(., n).
 */
class RadialProfile {
public:
    enum class Kind { Zero, Constant, InversePower, Indicator, Custom };

    static RadialProfile zero();
    static RadialProfile constant(double value);
    /// alpha |x|^{-s}
    static RadialProfile inverse_power(double alpha, double exponent);
    /// value on {|x| <= radius}, 0 outside
    static RadialProfile indicator(double value, double radius);
    static RadialProfile custom(FieldVector samples);

    Kind kind() const { return kind_; }
    double value() const { return value_; }        ///< constant / indicator value
    double alpha() const { return value_; }        ///< inverse_power coefficient
    double exponent() const { return exponent_; }  ///< inverse_power exponent s
    double radius() const { return radius_; }      ///< indicator radius
    std::optional<double> cap() const { return cap_; }

    /// Pointwise min with n (keeps the smaller of an existing cap and n).
    RadialProfile truncated(double n) const;

    /// Values at the cell centres; custom profiles must live on this grid.
    FieldVector sample(const GridPtr& grid) const;

    /// True if the profile vanishes identically (before sampling).
    bool is_zero() const;
    std::string describe() const;

private:
    Kind kind_ = Kind::Zero;
    double value_ = 0.0;
    double exponent_ = 0.0;
    double radius_ = 0.0;
    std::optional<double> cap_;
    std::optional<FieldVector> samples_;
};

using Potential = RadialProfile;
using SourceTerm = RadialProfile;

/// Potentials: inverse powers only with s in {2, 4}; nonnegative.
void validate_potential(const Potential& a);
/// Sources: b >= 0, b not identically zero on the grid, finite weighted L^2 norm.
void validate_source(const SourceTerm& b, const GridPtr& grid);

/**
 * Convex C^1 nonlinearity with f(0) = 0 = f'(0), optionally truncated to
 * f_n = min(f, n).
 */
class Nonlinearity {
public:
    enum class Kind { Zero, Power, ExpReduced };

    static Nonlinearity zero();
    /// t^p; rejects p <= 1 (f'(0) = 0 and convexity need p > 1).
    static Nonlinearity power(double p);
    /// e^t - 1 - t
    static Nonlinearity exp_reduced();

    Kind kind() const { return kind_; }
    double exponent() const { return p_; }
    std::optional<double> cap() const { return cap_; }
    bool is_zero() const { return kind_ == Kind::Zero; }

    Nonlinearity truncated(double n) const;

    double value(double t) const;
    double derivative(double t) const;
    /// log f(t); -inf where f vanishes. Finite where value() overflows.
    double log_value(double t) const;
    /// t f'(t) / f(t) for the untruncated f.
    double elasticity(double t) const;

    std::string describe() const;

private:
    Kind kind_ = Kind::Zero;
    double p_ = 0.0;
    std::optional<double> cap_;
};

/// g(s) = sup_{t > 0} f(t) / f(ts), sampled on log-spaced t in [1e-6, 1e6]
/// (2000 points) with golden-section refinement around the best sample.
double g_of_s(const Nonlinearity& f, double s);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct VerdictEvidence {
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
    /// (argument, value) samples backing the verdict.
    std::vector<std::pair<double, double>> samples;
    /// Fitted tail exponent or limiting value, when relevant.
    double fitted = 0.0;
};

struct FAssumptionReport {
    bool structural = false;  ///< f(0) = 0 = f'(0), convex, nondecreasing
    std::string structural_note;
    VerdictEvidence superlinear;   ///< f(t)/t -> infinity
    VerdictEvidence g_integrable;  ///< int_1^inf g < inf and s g(s) < 1 for s > 1
    VerdictEvidence kg_vanishes;   ///< K g(K) -> 0
    VerdictEvidence growth_ratio;  ///< lim s f'(s)/f(s) > 1
    double g_integral = 0.0;       ///< int_1^S g plus fitted tail
    bool all_pass() const;
};

FAssumptionReport check_f_assumptions(const Nonlinearity& f);

/// The full problem, bundled with the cached coercivity constant.
struct ProblemSpec {
    GridPtr grid;
    Potential potential = RadialProfile::zero();
    SourceTerm source = RadialProfile::constant(1.0);
    Nonlinearity nonlinearity = Nonlinearity::zero();
    std::optional<RadialProfile> coefficient;  ///< c(x) multiplying f(u)
    double mu = 0.0;
    double lambda = 0.0;
    std::optional<double> gamma_hat;  ///< filled by with_gamma()
};

/// Sampled coefficient fields of a spec.
struct SampledProblem {
    FieldVector a;  ///< potential
    FieldVector b;  ///< source
    FieldVector c;  ///< coefficient of f (ones when absent)
};
SampledProblem sample(const ProblemSpec& spec);

struct GammaEstimate {
    SpectralEstimate spectral;
    bool hypothesis_holds = false;  ///< gamma_hat > 0
    std::string message;
    double value() const { return spectral.eigenvalue; }
};

/// Smallest eigenvalue of (Delta_h^2 - diag(a^2)) v = gamma v.
GammaEstimate estimate_gamma(const GridPtr& grid, const Potential& a);
/// Smallest eigenvalue of Delta_h^2 - mu diag(a); throws HypothesisError if
/// mu >= sqrt(gamma_hat) or the result is not positive.
SpectralEstimate estimate_gamma_tilde(const GridPtr& grid, const Potential& a, double mu,
                                      std::optional<double> gamma_hat = {});

/// (N (N - 4) / 4)^2
double rellich_constant(int dimension);

struct RellichEstimate {
    double value = 0.0;
    double target = 0.0;
    SpectralEstimate spectral;
};
/// min over the discrete space of ||Delta_h u||^2 / int r^{-4} u^2.
RellichEstimate estimate_rellich(const GridPtr& grid);

/// Spec with a_n = min(a, n), b_n = min(b, n), f_n = min(f, n).
ProblemSpec truncate(const ProblemSpec& spec, double n);

/// Copy of the spec with gamma_hat computed (unless mu a vanishes).
ProblemSpec with_gamma(ProblemSpec spec);

/**
 * Gate in front of every nonlinear solve. Returns the gamma_hat it used
 * (infinity when mu a vanishes) and throws HypothesisError when
 * gamma_hat <= 0 or mu >= sqrt(gamma_hat).
 */
double require_admissible(const ProblemSpec& spec);

}  // namespace biharm

#endif  // BIHARM_PROBLEM_MODEL_HPP

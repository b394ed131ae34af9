#include <doctest.h>

#include <cmath>

#include "biharm/extremal.hpp"
#include "biharm/stability.hpp"

using namespace biharm;

namespace {
ProblemSpec power2(int m, double lambda) {
    ProblemSpec s;
    s.grid = build_grid(5, 1.0, m);
    s.nonlinearity = Nonlinearity::power(2.0);
    s.lambda = lambda;
    return s;
}
}  // namespace

TEST_SUITE("stability") {

TEST_CASE("linear problem: the linearisation is the bare bilaplacian") {
    ProblemSpec s = power2(200, 1.0);
    s.nonlinearity = Nonlinearity::zero();
    const IterationReport u = solve_minimal(s);
    const SpectralEstimate e = linearized_first_eigen(s, u.u);
    CHECK(e.eigenvalue == doctest::Approx(estimate_gamma(s.grid, RadialProfile::zero()).value()).epsilon(1e-10));
}

TEST_CASE("linearised potential") {
    ProblemSpec s = power2(32, 1.0);
    s.potential = RadialProfile::constant(3.0);
    s.mu = 2.0;
    const FieldVector u = FieldVector::constant(s.grid, 0.5);
    const FieldVector p = linearized_potential(s, u);
    CHECK(p[0] == doctest::Approx(6.0 + 1.0));
    FieldVector neg = u;
    neg[3] = -1.0;
    CHECK_THROWS_AS(linearized_potential(s, neg), std::invalid_argument);
}

TEST_CASE("stability along the ladder below the bracket") {
    const ProblemSpec s = power2(256, 0.0);
    const LambdaBracket br = bracket_lambda_star(s, 1.0, 10.0);
    const std::vector<double> ladder = stability_ladder(br.lambda_minus);
    REQUIRE(ladder.size() == 10);
    CHECK(ladder.back() == doctest::Approx(0.95 * br.lambda_minus));
    const StabilitySweep sw = stability_sweep(s, ladder);
    CHECK(sw.unsolved.empty());
    CHECK(sw.all_stable);
    CHECK(sw.nonincreasing);
    for (const StabilityRow& r : sw.rows) CHECK(r.eigenvalue >= -1e-6);
}

TEST_CASE("ground state and quotient at a sub-extremal solution") {
    const ProblemSpec s = power2(256, 2.5e4);
    const IterationReport u = solve_minimal(s);
    REQUIRE(u.converged());
    const SpectralEstimate e = linearized_first_eigen(s, u.u, true);
    CHECK(e.eigenvalue > 0.0);
    REQUIRE(e.second_eigenvalue);
    CHECK(*e.second_eigenvalue > e.eigenvalue);
    CHECK(e.eigenvector.min() >= 0.0);
    const FieldVector trial = FieldVector::from_radial(s.grid, [](double r) { return std::cos(1.4 * r); });
    CHECK(stability_quotient(s, u.u, trial) >= e.eigenvalue);
    CHECK(stability_quotient(s, u.u, e.eigenvector) == doctest::Approx(e.eigenvalue).epsilon(1e-8));
}

TEST_CASE("energy identity and the epsilon-C pairs") {
    const ProblemSpec s = power2(256, 2e4);
    const IterationReport u = solve_minimal(s);
    REQUIRE(u.converged());
    const EnergyReport en = energy_identity_check(s, u.u);
    CHECK(en.identity_holds);
    CHECK(en.identity_defect <= 1e-8);
    CHECK(en.stability_inequality);
    // f = s^2: (1 + eps) s^3 - 2 s^3 <= 0 for eps <= 1, so C = 0.
    REQUIRE(en.pairs.size() == 3);
    for (const EpsilonPair& p : en.pairs) CHECK(std::abs(p.constant) <= 1e-12);
    CHECK(en.linearized_term == doctest::Approx(2.0 * en.nonlinear_term));
}

TEST_CASE("restarts reach the same minimal solution") {
    const MultistartCheck mc = multistart_consistency(power2(128, 1e4));
    CHECK(mc.consistent);
    CHECK(mc.outcomes.size() == 2);
    for (double d : mc.differences) CHECK(d <= 1e-8);
}

TEST_CASE("truncated problems approach the untruncated eigenvalue") {
    ProblemSpec s = power2(128, 1e4);
    const IterationReport u = solve_minimal(s);
    const double full = linearized_first_eigen(s, u.u).eigenvalue;
    const auto rows = truncated_stability(s, {10.0, 1e3, 1e6});
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) CHECK(r.eigenvalue >= -1e-6);
    CHECK(rows.back().eigenvalue == doctest::Approx(full).epsilon(1e-9));
}

}

#include <doctest.h>

#include <cmath>

#include "biharm/extremal.hpp"

using namespace biharm;

namespace {
ProblemSpec power2(int m, double radius = 1.0) {
    ProblemSpec s;
    s.grid = build_grid(5, radius, m);
    s.nonlinearity = Nonlinearity::power(2.0);
    return s;
}
}  // namespace

TEST_SUITE("extremal_estimator") {

TEST_CASE("bracket is narrow, consistent and sound") {
    const ProblemSpec s = power2(256);
    const LambdaBracket br = bracket_lambda_star(s, 1.0, 10.0);
    CHECK(br.relative_width() <= 1e-3);
    CHECK(br.consistent());
    CHECK(br.plus_diverged);
    CHECK(br.lambda_minus < br.lambda_plus);
    ProblemSpec t = s;
    t.lambda = 0.9 * br.lambda_minus;
    CHECK(solve_minimal(t).converged());
    t.lambda = 1.1 * br.lambda_plus;
    CHECK(solve_minimal(t).outcome == Outcome::Diverged);

    const LambdaBracket fine = bracket_lambda_star(power2(512), 1.0, 10.0);
    CHECK(std::abs(fine.midpoint() - br.midpoint()) <= 0.02 * br.midpoint());
}

TEST_CASE("linear problems have no upper bound") {
    ProblemSpec s = power2(64);
    s.nonlinearity = Nonlinearity::zero();
    BisectionControls bc;
    bc.lambda_hi_max = 1e6;
    CHECK_THROWS_AS(bracket_lambda_star(s, 1.0, 10.0, bc), NoUpperBound);
}

TEST_CASE("continuation toward the extremal solution") {
    const ProblemSpec s = power2(256);
    const LambdaBracket br = bracket_lambda_star(s, 1.0, 10.0);
    const ExtremalTrace tr = continue_to_extremal(s, br, 10);
    REQUIRE(tr.outcome == Outcome::Converged);
    CHECK(tr.growth_condition == Verdict::Pass);
    CHECK(tr.lambdas.size() == 10);
    for (std::size_t k = 1; k < tr.seminorms.size(); ++k) CHECK(tr.seminorms[k] > tr.seminorms[k - 1]);
    CHECK(tr.seminorm_spread() <= 1e2);
    CHECK(tr.cauchy_tail(5));
}

TEST_CASE("linear ladder scales zeta_1") {
    ProblemSpec s = power2(64);
    s.nonlinearity = Nonlinearity::zero();
    const ExtremalTrace tr = continue_to_extremal(s, std::vector<double>{1.0, 2.0, 3.0});
    REQUIRE(tr.outcome == Outcome::Converged);
    const IterationReport z = solve_zeta1(s);
    FieldVector scaled = z.u;
    scaled *= 3.0;
    CHECK((tr.u_star - scaled).max_abs() <= 1e-9 * scaled.max_abs());
    CHECK(tr.seminorms[1] == doctest::Approx(2.0 * tr.seminorms[0]));
}

TEST_CASE("extremal ladder") {
    const auto l = extremal_ladder(8.0, 3);
    REQUIRE(l.size() == 3);
    CHECK(l[0] == 4.0);
    CHECK(l[1] == 6.0);
    CHECK(l[2] == 7.0);
    CHECK_THROWS_AS(extremal_ladder(-1.0, 3), std::invalid_argument);
}

TEST_CASE("Young constants") {
    for (double eps : {0.1, 0.5, 2.0}) {
        CHECK(young_constant(Nonlinearity::power(2.0), eps) == doctest::Approx(1.0 / (4.0 * eps)).epsilon(1e-10));
        // Vertex of t - eps (e^t - 1 - t) at e^t = 1 + 1/eps.
        const double t = std::log1p(1.0 / eps);
        const double ref = t - eps * (std::expm1(t) - t);
        CHECK(young_constant(Nonlinearity::exp_reduced(), eps) == doctest::Approx(ref).epsilon(1e-10));
    }
    // p = 3: maximiser t = (3 eps)^{-1/2}.
    const double t3 = 1.0 / std::sqrt(3.0 * 0.2);
    CHECK(young_constant(Nonlinearity::power(3.0), 0.2) == doctest::Approx(t3 - 0.2 * t3 * t3 * t3).epsilon(1e-10));
    CHECK(std::isinf(young_constant(Nonlinearity::zero(), 1.0)));
}

TEST_CASE("weak-solution threshold bound dominates the bracket") {
    const ProblemSpec s = power2(128);
    const LambdaTildeReport lt = lambda_tilde_diagnostic(s);
    REQUIRE(lt.applicable);
    CHECK(lt.rows.size() >= 4);
    const LambdaBracket br = bracket_lambda_star(s, 1.0, 10.0);
    CHECK(lt.lambda_tilde_plus >= br.lambda_plus);

    ProblemSpec z = s;
    z.nonlinearity = Nonlinearity::zero();
    const LambdaTildeReport none = lambda_tilde_diagnostic(z);
    CHECK_FALSE(none.applicable);
    CHECK(none.note.find("inapplicable") != std::string::npos);
}

TEST_CASE("complete blow-up probe") {
    const ProblemSpec s = power2(128, 4.0);
    const LambdaBracket br = bracket_lambda_star(s, 0.1, 1.0);
    const std::vector<double> levels = {10.0, 100.0, 1000.0, 10000.0};

    const BlowUpTrace above = blow_up_probe(s, 2.0 * br.lambda_plus, levels);
    CHECK(above.monotone_in_n);
    for (std::size_t k = 1; k < above.interior_min.size(); ++k) CHECK(above.interior_min[k] >= above.interior_min[k - 1]);
    CHECK(above.interior_min.back() / above.interior_min.front() > 1e2);
    CHECK(above.verdict == BlowUpVerdict::BlowUpSignature);

    const BlowUpTrace below = blow_up_probe(s, 0.5 * br.lambda_minus, levels, {}, true);
    CHECK(below.verdict == BlowUpVerdict::Bounded);
    REQUIRE(below.distance_to_untruncated.size() == levels.size());
    CHECK(below.distance_to_untruncated.back() <= 1e-8);

    const BlowUpTrace serial = blow_up_probe(s, 0.5 * br.lambda_minus, levels, {}, false);
    CHECK(serial.interior_min == below.interior_min);

    const BlowUpTrace single = blow_up_probe(s, 2.0 * br.lambda_plus, {10.0});
    CHECK(single.verdict == BlowUpVerdict::Inconclusive);
}

}

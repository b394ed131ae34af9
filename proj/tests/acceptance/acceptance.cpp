// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "biharm/extremal.hpp"
#include "biharm/operators.hpp"
#include "biharm/stability.hpp"
#include "../oracles.hpp"

using namespace biharm;

namespace {

struct Tally {
    bool pass = true;
    std::ostringstream detail = [] { std::ostringstream s; s.precision(9); return s; }();
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ProblemSpec model(int m, double radius = 1.0, Nonlinearity f = Nonlinearity::power(2.0)) {
    ProblemSpec s;
    s.grid = build_grid(5, radius, m);
    s.nonlinearity = f;
    return s;
}

// Shared across criteria 5-8 and 10.
struct Bracketed {
    ProblemSpec spec;
    LambdaBracket bracket;
};
Bracketed& model_bracket() {
    static Bracketed b = [] {
        Bracketed out{model(256), {}};
        out.bracket = bracket_lambda_star(out.spec, 1.0, 10.0);
        return out;
    }();
    return b;
}

void linear_solve_oracle(Tally& o) {
    const auto t0 = std::chrono::steady_clock::now();
    double err[2];
    double peak = 0.0;
    int k = 0;
    for (int m : {128, 256}) {
        const GridPtr g = build_grid(5, 1.0, m);
        const BiharmonicSolution s = NavierBiharmonicOperator(g).solve(FieldVector::constant(g, 1.0));
        double e = 0.0;
        for (std::size_t i = 0; i < s.u.size(); ++i) e = std::max(e, std::abs(s.u[i] - oracle::quartic(5, 1.0, g->node(i))));
        err[k++] = e;
        peak = s.u.max();
    }
    const double elapsed = seconds_since(t0);
    const double ratio = err[0] / err[1];
    o.detail << "errors " << err[0] << ", " << err[1] << ", ratio " << ratio << ", peak " << peak << " vs "
             << 9.0 / 1400.0 << ", " << elapsed << " s ";
    o.require(ratio >= 3.5 && ratio <= 4.5, "error ratio in [3.5, 4.5]");
    o.require(elapsed < 1.0, "runtime < 1 s");
}

void spectral_oracle(Tally& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const GammaEstimate est = estimate_gamma(build_grid(5, 1.0, 2000), RadialProfile::zero());
    const double elapsed = seconds_since(t0);
    const double ref = std::pow(oracle::first_zero_j32(), 4);
    const double rel = std::abs(est.value() - ref) / ref;
    o.detail << "gamma_hat " << est.value() << " vs " << ref << " (rel " << rel << "), " << elapsed << " s ";
    o.require(rel <= 0.01, "within 1% at M = 2000");
    o.require(est.spectral.certified, "certified eigenpair");
    o.require(elapsed < 30.0, "runtime < 30 s");
}

void rellich(Tally& o) {
    const double target = rellich_constant(5);
    double previous = INFINITY;
    double last = 0.0;
    for (int m : {250, 500, 1000, 2000}) {
        const RellichEstimate est = estimate_rellich(build_grid(5, 1.0, m));
        o.detail << "M=" << m << ": " << est.value << "  ";
        o.require(est.value >= target, "estimate >= 25/16 at M = " + std::to_string(m));
        o.require(est.value < previous, "decrease at M = " + std::to_string(m));
        previous = est.value;
        last = est.value;
    }
    o.detail << "target " << target << ", relative gap " << (last - target) / target << " ";
    o.require((last - target) / target <= 0.10, "within 10% at M = 2000");
}

void contraction(Tally& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (double alpha : {0.25, 0.625, 1.0}) {
        ProblemSpec s = model(256);
        s.potential = RadialProfile::inverse_power(alpha, 2.0);
        s.mu = 1.0;
        s = with_gamma(s);
        s.mu = 0.5 * std::sqrt(*s.gamma_hat);
        const IterationReport z = solve_zeta1(s);
        const double bound = s.mu / std::sqrt(*s.gamma_hat) + 0.05;
        o.detail << "alpha " << alpha << ": max ratio " << z.max_ratio() << " ";
        o.require(z.converged(), "zeta_1 converged");
        o.require(z.max_ratio() <= bound, "ratios <= mu/sqrt(gamma_hat) + 0.05");
        o.require(z.monotone, "iterates nondecreasing");
        o.require(z.u.min() > 0.0, "zeta_1 > 0");
    }
    const double elapsed = seconds_since(t0);
    o.detail << elapsed << " s ";
    o.require(elapsed < 5.0, "runtime < 5 s");
}

void two_sided_bound(Tally& o) {
    const Bracketed& b = model_bracket();
    const IterationReport z = solve_zeta1(b.spec);
    const auto l0 = find_sandwich_threshold(b.spec, z.u, b.bracket.lambda_minus);
    o.require(l0.has_value(), "lambda_0 found");
    if (!l0) return;
    o.detail << "lambda_0 " << *l0 << " ";
    for (double f : {0.25, 0.5, 1.0}) {
        ProblemSpec s = b.spec;
        s.lambda = f * *l0;
        const IterationReport u = solve_minimal(s);
        o.require(u.converged() && check_sandwich(u.u, z.u, s.lambda, 1e-9).holds(), "sandwich at lambda_0 * " +
                                                                                         std::to_string(f));
    }
    int convergent = 0;
    for (double lambda : stability_ladder(b.bracket.lambda_minus, 20, 0.95)) {
        ProblemSpec s = b.spec;
        s.lambda = lambda;
        const IterationReport u = solve_minimal(s);
        if (!u.converged()) continue;
        ++convergent;
        o.require(check_sandwich(u.u, z.u, lambda, 1e-9).lower, "lower bound at lambda " + std::to_string(lambda));
    }
    o.detail << "lower bound checked on " << convergent << " convergent lambdas up to 0.95 lambda_minus ";
    o.require(convergent == 20, "all ladder solves converge");
}

void extremal_bracket(Tally& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const LambdaBracket& coarse = model_bracket().bracket;
    const LambdaBracket fine = bracket_lambda_star(model(512), 1.0, 10.0);
    const double shift = std::abs(fine.midpoint() - coarse.midpoint()) / coarse.midpoint();
    o.detail << "M=256 [" << coarse.lambda_minus << ", " << coarse.lambda_plus << "], M=512 [" << fine.lambda_minus << ", "
             << fine.lambda_plus << "], midpoint shift " << shift << " ";
    o.require(coarse.relative_width() <= 1e-3 && fine.relative_width() <= 1e-3, "relative width <= 1e-3");
    o.require(shift <= 0.02, "midpoint shift <= 2%");
    o.require(coarse.consistent() && fine.consistent(), "consistent histories");
    for (const LambdaBracket* br : {&coarse, &fine}) {
        ProblemSpec s = br == &coarse ? model(256) : model(512);
        s.lambda = 0.9 * br->lambda_minus;
        o.require(solve_minimal(s).converged(), "0.9 lambda_minus converges");
        s.lambda = 1.1 * br->lambda_plus;
        o.require(solve_minimal(s).outcome == biharm::Outcome::Diverged, "1.1 lambda_plus diverges");
    }
    const double elapsed = seconds_since(t0);
    o.detail << elapsed << " s ";
    o.require(elapsed < 120.0, "runtime < 2 min");
}

void stability(Tally& o) {
    const Bracketed& b = model_bracket();
    const StabilitySweep sw = stability_sweep(b.spec, stability_ladder(b.bracket.lambda_minus, 10, 0.95));
    o.detail << "eigenvalues";
    for (const StabilityRow& r : sw.rows) o.detail << " " << r.eigenvalue;
    o.detail << " ";
    o.require(sw.unsolved.empty(), "every rung solved");
    o.require(sw.all_stable, "eigenvalues >= -1e-6");
    o.require(sw.nonincreasing, "nonincreasing within 1e-6");
}

void continuation(Tally& o) {
    const Bracketed& b = model_bracket();
    const ExtremalTrace tr = continue_to_extremal(b.spec, b.bracket, 10);
    o.detail << "growth condition " << to_string(tr.growth_condition) << ", seminorm spread " << tr.seminorm_spread()
             << ", last differences";
    for (std::size_t k = tr.l2_differences.size() >= 5 ? tr.l2_differences.size() - 5 : 0; k < tr.l2_differences.size(); ++k) {
        o.detail << " " << tr.l2_differences[k];
    }
    o.detail << " ";
    o.require(tr.outcome == biharm::Outcome::Converged, "ladder solved");
    o.require(tr.growth_condition == Verdict::Pass, "growth condition holds for f");
    o.require(tr.seminorm_spread() <= 1e2, "seminorm max/min <= 1e2");
    o.require(tr.cauchy_tail(5), "differences decreasing over the last 5 steps");
}

void blow_up(Tally& o) {
    const ProblemSpec s = model(128, 4.0);
    const LambdaBracket br = bracket_lambda_star(s, 0.1, 1.0);
    const std::vector<double> levels = {10.0, 100.0, 1000.0, 10000.0};
    const BlowUpTrace above = blow_up_probe(s, 2.0 * br.lambda_plus, levels);
    bool nondecreasing = true;
    for (std::size_t k = 1; k < above.interior_min.size(); ++k) {
        nondecreasing = nondecreasing && above.interior_min[k] >= above.interior_min[k - 1];
    }
    const double growth = above.interior_min.back() / above.interior_min.front();
    o.detail << "R=4 bracket [" << br.lambda_minus << ", " << br.lambda_plus << "]; minima at 2 lambda_plus";
    for (double m : above.interior_min) o.detail << " " << m;
    o.detail << " (" << to_string(above.verdict) << "); ";
    o.require(nondecreasing, "interior minima nondecreasing");
    o.require(growth > 1e2, "last/first > 1e2");

    const BlowUpTrace below = blow_up_probe(s, 0.5 * br.lambda_minus, levels);
    o.detail << "at 0.5 lambda_minus " << to_string(below.verdict) << ", distances";
    for (double d : below.distance_to_untruncated) o.detail << " " << d;
    o.detail << " ";
    o.require(below.verdict == BlowUpVerdict::Bounded, "Bounded below the bracket");
    bool shrinking = !below.distance_to_untruncated.empty();
    for (std::size_t k = 1; k < below.distance_to_untruncated.size(); ++k) {
        shrinking = shrinking && below.distance_to_untruncated[k] <= below.distance_to_untruncated[k - 1];
    }
    o.require(shrinking && below.distance_to_untruncated.back() <= 1e-8, "||u_n - u_lambda|| -> 0");
}

void thresholds(Tally& o) {
    struct Case {
        std::string name;
        ProblemSpec spec;
        double lo, hi;
    };
    std::vector<Case> cases = {
        {"power(2) R=1 M=256", model(256), 1.0, 10.0},
        {"power(2) R=1 M=512", model(512), 1.0, 10.0},
        {"power(2) R=4 M=128", model(128, 4.0), 0.1, 1.0},
        {"power(3) R=1 M=256", model(256, 1.0, Nonlinearity::power(3.0)), 1.0, 10.0},
        {"exp_reduced R=1 M=256", model(256, 1.0, Nonlinearity::exp_reduced()), 1.0, 10.0},
    };
    ProblemSpec hardy = model(256);
    hardy.potential = RadialProfile::inverse_power(0.625, 2.0);
    hardy.mu = 1.0;
    cases.push_back({"power(2) a=0.625 r^-2 mu=1 M=256", hardy, 1.0, 10.0});
    for (const Case& c : cases) {
        const LambdaBracket br = bracket_lambda_star(c.spec, c.lo, c.hi);
        const LambdaTildeReport lt = lambda_tilde_diagnostic(c.spec);
        o.detail << c.name << ": " << lt.lambda_tilde_plus << " >= " << br.lambda_plus << "; ";
        o.require(lt.applicable, c.name + " diagnostic applicable");
        o.require(lt.lambda_tilde_plus >= br.lambda_plus, c.name);
    }
}

void hypothesis_checker(Tally& o) {
    for (double p : {1.5, 2.0, 3.0}) {
        const Nonlinearity f = Nonlinearity::power(p);
        const FAssumptionReport r = check_f_assumptions(f);
        o.require(r.all_pass(), "all verdicts pass for p = " + std::to_string(p));
        double worst = 0.0;
        for (double s : {2.0, 10.0, 1e3, 1e5}) {
            const double g = g_of_s(f, s);
            worst = std::max({worst, std::abs(g / std::pow(s, -p) - 1.0),
                              std::abs(s * g / std::pow(s, 1.0 - p) - 1.0)});
        }
        o.require(worst <= 1e-10, "closed forms g = s^-p, s g = s^(1-p)");
        o.require(std::abs(r.kg_vanishes.fitted - (1.0 - p)) <= 1e-6, "K g(K) exponent 1 - p");
        o.detail << "p=" << p << " pass (max rel. dev " << worst << "); ";
    }
    const FAssumptionReport weak = check_f_assumptions(Nonlinearity::power(1.0 + 1e-6));
    o.detail << "p=1+1e-6: tail fit " << to_string(weak.g_integrable.verdict) << " ";
    o.require(weak.g_integrable.verdict != Verdict::Pass, "tail-fit verdict never pass");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Tally&)>>> criteria = {
        {"linear-solve oracle", linear_solve_oracle},
        {"spectral oracle", spectral_oracle},
        {"Rellich constant", rellich},
        {"contraction certificate", contraction},
        {"two-sided bound", two_sided_bound},
        {"extremal bracket", extremal_bracket},
        {"stability", stability},
        {"extremal continuation", continuation},
        {"complete blow-up", blow_up},
        {"threshold consistency", thresholds},
        {"hypothesis checker", hypothesis_checker},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Tally o;
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[exception: " << e.what() << "]";
        }
        failed += !o.pass;
        std::printf("criterion %zu (%s): %s  %s\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

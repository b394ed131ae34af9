#include "biharm/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "biharm/eigen.hpp"

namespace biharm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}
}

// ----------------------------------------------------------- bracketing

std::size_t LambdaBracket::inconclusive_count() const {
    return static_cast<std::size_t>(std::count_if(history.begin(), history.end(), [](const BracketEntry& e) {
        return e.outcome == Outcome::Inconclusive;
    }));
}

bool LambdaBracket::consistent() const {
    double max_conv = -kInf;
    double min_div = kInf;
    for (const BracketEntry& e : history) {
        if (e.outcome == Outcome::Converged) max_conv = std::max(max_conv, e.lambda);
        if (e.outcome == Outcome::Diverged) min_div = std::min(min_div, e.lambda);
    }
    return max_conv < min_div;
}

LambdaBracket bracket_lambda_star(const ProblemSpec& tmpl, double lambda_lo, double lambda_hi,
                                  const BisectionControls& bisection, const IterationControls& controls) {
    if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo)) {
        throw std::invalid_argument("bracket_lambda_star needs 0 < lambda_lo < lambda_hi");
    }
    const ProblemSpec base = with_gamma(tmpl);
    LambdaBracket br;
    auto run = [&](double lambda) {
        ProblemSpec s = base;
        s.lambda = lambda;
        const IterationReport rep = solve_minimal(s, controls);
        br.history.push_back({lambda, rep.outcome, rep.iterations});
        return rep.outcome;
    };

    double lo = lambda_lo;
    while (run(lo) != Outcome::Converged) {
        lo /= 10.0;
        if (lo < bisection.lambda_lo_min) {
            throw NoLowerBound("no convergent lambda found down to " + fmt(bisection.lambda_lo_min));
        }
    }
    double hi = lambda_hi;
    for (Outcome o = run(hi); o != Outcome::Diverged; o = run(hi)) {
        if (o == Outcome::Converged) lo = hi;
        hi *= 10.0;
        if (hi > bisection.lambda_hi_max) {
            throw NoUpperBound("no upper bound found: no divergence up to lambda = " +
                                   fmt(bisection.lambda_hi_max),
                               br.history);
        }
    }

    bool plus_diverged = true;
    for (int step = 0; step < bisection.max_steps && (hi - lo) / lo > bisection.rel_width; ++step) {
        const double mid = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        const Outcome o = run(mid);
        if (o == Outcome::Converged) {
            lo = mid;
        } else {
            hi = mid;
            plus_diverged = o == Outcome::Diverged;
        }
    }
    br.lambda_minus = lo;
    br.lambda_plus = hi;
    br.plus_diverged = plus_diverged;
    return br;
}

// ---------------------------------------------------------- continuation

double ExtremalTrace::seminorm_spread() const {
    if (seminorms.empty()) return 0.0;
    const auto [mn, mx] = std::minmax_element(seminorms.begin(), seminorms.end());
    return *mx / *mn;
}

bool ExtremalTrace::cauchy_tail(std::size_t steps) const {
    if (l2_differences.size() < steps) return false;
    for (std::size_t k = l2_differences.size() - steps + 1; k < l2_differences.size(); ++k) {
        if (!(l2_differences[k] < l2_differences[k - 1])) return false;
    }
    return true;
}

std::vector<double> extremal_ladder(double lambda_minus, int steps) {
    if (!(lambda_minus > 0.0) || steps < 1) throw std::invalid_argument("extremal_ladder needs lambda_minus > 0, steps >= 1");
    std::vector<double> out;
    for (int j = 1; j <= steps; ++j) out.push_back(lambda_minus * (1.0 - std::ldexp(1.0, -j)));
    return out;
}

ExtremalTrace continue_to_extremal(const ProblemSpec& tmpl, const std::vector<double>& ladder,
                                   const IterationControls& controls) {
    if (!std::is_sorted(ladder.begin(), ladder.end())) throw std::invalid_argument("ladder must be increasing");
    ExtremalTrace tr;
    tr.growth_condition = check_f_assumptions(tmpl.nonlinearity).growth_ratio.verdict;
    const ProblemSpec base = with_gamma(tmpl);
    std::optional<FieldVector> previous;
    for (double lambda : ladder) {
        ProblemSpec s = base;
        s.lambda = lambda;
        // u at a smaller lambda is a subsolution, so it is a valid monotone start.
        IterationReport rep = solve_minimal(s, controls, SolveOptions{previous});
        if (!rep.converged()) {
            tr.outcome = Outcome::Inconclusive;
            tr.note = "solve at lambda = " + fmt(lambda) + " ended " + to_string(rep.outcome);
            break;
        }
        tr.lambdas.push_back(lambda);
        tr.seminorms.push_back(rep.h2_seminorms.back());
        if (!tr.solutions.empty()) tr.l2_differences.push_back(weighted_l2_norm(rep.u - tr.solutions.back()));
        previous = rep.u;
        tr.solutions.push_back(std::move(rep.u));
        if (tr.seminorms.back() > 10.0 * tr.seminorms.front()) {
            tr.outcome = Outcome::Inconclusive;
            tr.note = "seminorm grew beyond 10x its first value; the grid under-resolves the extremal solution";
            break;
        }
    }
    if (!tr.solutions.empty()) tr.u_star = tr.solutions.back();
    return tr;
}

ExtremalTrace continue_to_extremal(const ProblemSpec& tmpl, const LambdaBracket& bracket, int steps,
                                   const IterationControls& controls) {
    return continue_to_extremal(tmpl, extremal_ladder(bracket.lambda_minus, steps), controls);
}

// -------------------------------------------------------------- blow-up

std::string to_string(BlowUpVerdict v) {
    switch (v) {
        case BlowUpVerdict::BlowUpSignature: return "BlowUpSignature";
        case BlowUpVerdict::Bounded: return "Bounded";
        case BlowUpVerdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

BlowUpTrace blow_up_probe(const ProblemSpec& tmpl, double lambda, const std::vector<double>& levels,
                          const IterationControls& controls, bool parallel) {
    if (levels.empty()) throw std::invalid_argument("blow_up_probe: empty truncation ladder");
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (!(levels[k] > levels[k - 1])) throw std::invalid_argument("blow_up_probe: levels must be increasing");
    }
    BlowUpTrace tr;
    tr.lambda = lambda;
    tr.levels = levels;

    const long count = static_cast<long>(levels.size());
    std::vector<IterationReport> reports(levels.size());
    std::vector<std::exception_ptr> errors(levels.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long k = 0; k < count; ++k) {
        try {
            ProblemSpec s = truncate(tmpl, levels[static_cast<std::size_t>(k)]);
            s.lambda = lambda;
            reports[static_cast<std::size_t>(k)] = solve_minimal(s, controls);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    const GridPtr& grid = tmpl.grid;
    const double probe = 0.5 * grid->radius();
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const IterationReport& rep = reports[k];
        if (!rep.converged()) {
            throw IterationFailure("truncated problem at n = " + fmt(levels[k]) + " ended " +
                                       to_string(rep.outcome) + "; truncated problems are always solvable, so "
                                       "u_cap or max_iter is too small",
                                   rep);
        }
        double mn = kInf;
        for (std::size_t i = 0; i < rep.u.size() && grid->node(i) <= probe; ++i) mn = std::min(mn, rep.u[i]);
        tr.interior_min.push_back(mn);
        tr.sup_norms.push_back(rep.u.max_abs());
        tr.iterations.push_back(rep.iterations);
        if (k > 0) {
            const FieldVector& lo = reports[k - 1].u;
            const double slack = 1e-10 * rep.u.max_abs();
            for (std::size_t i = 0; i < lo.size(); ++i) {
                if (rep.u[i] < lo[i] - slack) {
                    tr.monotone_in_n = false;
                    break;
                }
            }
        }
    }

    ProblemSpec full = tmpl;
    full.lambda = lambda;
    const IterationReport untruncated = solve_minimal(full, controls);
    if (untruncated.converged()) {
        const double ref = weighted_l2_norm(untruncated.u);
        for (const IterationReport& rep : reports) tr.distance_to_untruncated.push_back(weighted_l2_norm(rep.u - untruncated.u) / ref);
    }

    const auto& m = tr.interior_min;
    if (m.size() < 2) {
        tr.verdict = BlowUpVerdict::Inconclusive;
        tr.note = "a single truncation level shows no trend";
        return tr;
    }
    bool nondecreasing = true;
    for (std::size_t k = 1; k < m.size(); ++k) {
        if (m[k] < m[k - 1] * (1.0 - 1e-12)) nondecreasing = false;
    }
    const double growth = m.back() / m.front();
    bool settled = m.size() >= 3;
    for (std::size_t k = m.size() >= 3 ? m.size() - 2 : m.size(); k < m.size(); ++k) {
        if (std::abs(m[k] - m[k - 1]) > 1e-3 * std::abs(m[k])) settled = false;
    }
    if (nondecreasing && growth > 1e2) {
        tr.verdict = BlowUpVerdict::BlowUpSignature;
        tr.note = "interior minimum grew by a factor " + fmt(growth);
    } else if (settled) {
        tr.verdict = BlowUpVerdict::Bounded;
        tr.note = "interior minima settled across the top three levels";
    } else {
        tr.verdict = BlowUpVerdict::Inconclusive;
        tr.note = "interior minimum grew by a factor " + fmt(growth) + " without settling";
    }
    return tr;
}

// ------------------------------------------------------ threshold bound

double young_constant(const Nonlinearity& f, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("young_constant needs eps > 0");
    // t - eps f(t) is concave; its maximiser solves eps f'(t) = 1.
    double hi = 1.0;
    while (epsilon * f.derivative(hi) < 1.0) {
        hi *= 2.0;
        if (hi > 1e300) return kInf;
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (epsilon * f.derivative(mid) < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double t = 0.5 * (lo + hi);
    return std::max(0.0, t - epsilon * f.value(t));
}

LambdaTildeReport lambda_tilde_diagnostic(const ProblemSpec& spec, std::vector<double> fractions) {
    LambdaTildeReport rep;
    if (fractions.empty()) fractions = {1.0, 0.5, 0.25, 0.1};
    const FAssumptionReport fa = check_f_assumptions(spec.nonlinearity);
    if (fa.superlinear.verdict != Verdict::Pass) {
        rep.note = "inapplicable: superlinear growth of f not established (" + fa.superlinear.note + ")";
        return rep;
    }
    const GridPtr& grid = spec.grid;
    const SampledProblem data = sample(spec);
    const NavierBiharmonicOperator op(grid);

    struct Density {
        std::string name;
        FieldVector psi;
    };
    std::vector<Density> tests;
    for (double rho : {0.25, 0.5, 0.75}) {
        FieldVector psi = FieldVector::from_radial(grid, [&](double r) { return r <= rho * grid->radius() ? 1.0 : 0.0; });
        if (psi.max() > 0.0) tests.push_back({"indicator(" + fmt(rho) + " R)", std::move(psi)});
    }
    {
        const WeightedPencil pencil(op, FieldVector(grid));
        SpectralEstimate ground = smallest_eigenpair(pencil, EigenOptions{});
        FieldVector psi = ground.eigenvector;
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = std::max(psi[i], 0.0);
        tests.push_back({"ground_state", std::move(psi)});
    }

    rep.lambda_tilde_plus = kInf;
    for (const Density& d : tests) {
        const FieldVector phi = op.solve(d.psi).u;
        double k = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            if (d.psi[i] > 0.0) k = std::max(k, d.psi[i] / (data.c[i] * phi[i]));
        }
        const double b_phi = weighted_l2_inner(data.b, phi);
        if (!std::isfinite(k) || !(b_phi > 0.0)) continue;
        const double psi_mass = integrate(d.psi);
        for (double theta : fractions) {
            if (!(theta > 0.0 && theta <= 1.0)) continue;
            TildeRow row;
            row.test = d.name;
            row.k = k;
            row.epsilon = theta / k;
            row.c_epsilon = young_constant(spec.nonlinearity, row.epsilon);
            row.bound = row.c_epsilon * psi_mass / b_phi;
            rep.lambda_tilde_plus = std::min(rep.lambda_tilde_plus, row.bound);
            rep.rows.push_back(row);
        }
    }
    rep.applicable = std::isfinite(rep.lambda_tilde_plus);
    rep.note = rep.applicable ? "minimum over test densities and epsilon fractions"
                              : "inapplicable: no finite C_eps bound (f does not dominate t)";
    return rep;
}

}  // namespace biharm

#include "biharm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "biharm/kernels.hpp"

namespace biharm {

namespace {
std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}
}  // namespace

FieldVector linearized_potential(const ProblemSpec& spec, const FieldVector& u) {
    require_on_grid(*spec.grid, u);
    if (u.min() < 0.0) throw std::invalid_argument("linearisation needs u >= 0");
    const SampledProblem data = sample(spec);
    FieldVector p(spec.grid);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = spec.mu * data.a[i] + data.c[i] * spec.nonlinearity.derivative(u[i]);
    }
    return p;
}

SpectralEstimate linearized_first_eigen(const ProblemSpec& spec, const FieldVector& u, bool compute_second) {
    FieldVector p = linearized_potential(spec, u);
    const NavierBiharmonicOperator op(spec.grid);
    EigenOptions opt;
    opt.initial_shift = -p.max_abs();
    opt.compute_second = compute_second;
    const WeightedPencil pencil(op, std::move(p));
    return smallest_eigenpair(pencil, opt);
}

double stability_quotient(const ProblemSpec& spec, const FieldVector& u, const FieldVector& phi) {
    const NavierBiharmonicOperator op(spec.grid);
    const WeightedPencil pencil(op, linearized_potential(spec, u));
    return pencil.rayleigh_quotient(phi);
}

std::vector<double> stability_ladder(double lambda_minus, int count, double top) {
    if (!(lambda_minus > 0.0) || count < 1 || !(top > 0.0)) throw std::invalid_argument("invalid stability ladder");
    std::vector<double> out;
    for (int k = 1; k <= count; ++k) out.push_back(top * lambda_minus * k / count);
    return out;
}

StabilitySweep stability_sweep(const ProblemSpec& tmpl, const std::vector<double>& ladder,
                               const IterationControls& controls) {
    StabilitySweep sw;
    const ProblemSpec base = with_gamma(tmpl);
    std::optional<FieldVector> previous;
    for (double lambda : ladder) {
        ProblemSpec s = base;
        s.lambda = lambda;
        StabilityRow row;
        row.lambda = lambda;
        const bool warm = previous && (sw.rows.empty() || lambda >= sw.rows.back().lambda);
        IterationReport rep = solve_minimal(s, controls, SolveOptions{warm ? previous : std::nullopt});
        row.solve_outcome = rep.outcome;
        if (!rep.converged()) {
            sw.unsolved.push_back(lambda);
            sw.rows.push_back(row);
            continue;
        }
        const SpectralEstimate est = linearized_first_eigen(s, rep.u);
        row.eigenvalue = est.eigenvalue;
        row.residual = est.residual;
        if (est.eigenvalue < -1e-6) {
            sw.all_stable = false;
            sw.discrepancies.push_back(lambda);
        }
        for (auto it = sw.rows.rbegin(); it != sw.rows.rend(); ++it) {
            if (it->solve_outcome != Outcome::Converged) continue;
            if (est.eigenvalue > it->eigenvalue + 1e-6) sw.nonincreasing = false;
            break;
        }
        previous = std::move(rep.u);
        sw.rows.push_back(row);
    }
    return sw;
}

std::vector<TruncatedStabilityRow> truncated_stability(const ProblemSpec& tmpl, const std::vector<double>& levels,
                                                       const IterationControls& controls) {
    std::vector<TruncatedStabilityRow> out;
    for (double n : levels) {
        const ProblemSpec s = truncate(tmpl, n);
        const IterationReport rep = solve_minimal(s, controls);
        if (!rep.converged()) {
            throw IterationFailure("truncated problem at n = " + fmt(n) + " ended " + to_string(rep.outcome),
                                   rep);
        }
        out.push_back({n, linearized_first_eigen(s, rep.u).eigenvalue});
    }
    return out;
}

EnergyReport energy_identity_check(const ProblemSpec& spec, const FieldVector& u) {
    require_on_grid(*spec.grid, u);
    const SampledProblem data = sample(spec);
    const NegLaplacianMatrix a(spec.grid);
    const FieldVector au = a.apply(u);
    const auto w = spec.grid->weights();
    EnergyReport rep;
    rep.stiffness = weighted_l2_inner(au, au);
    for (std::size_t i = 0; i < u.size(); ++i) {
        rep.potential_term += w[i] * spec.mu * data.a[i] * u[i] * u[i];
        rep.nonlinear_term += w[i] * data.c[i] * spec.nonlinearity.value(u[i]) * u[i];
        rep.source_term += w[i] * spec.lambda * data.b[i] * u[i];
        rep.linearized_term += w[i] * data.c[i] * spec.nonlinearity.derivative(u[i]) * u[i] * u[i];
    }
    const double lhs = rep.stiffness - rep.potential_term;
    const double rhs = rep.nonlinear_term + rep.source_term;
    const double scale = std::max({rep.stiffness, rep.potential_term, rhs, 1e-300});
    rep.identity_defect = std::abs(lhs - rhs) / scale;
    rep.identity_holds = rep.identity_defect <= 1e-8;
    rep.stability_inequality = rep.linearized_term <= lhs + 1e-8 * scale;

    if (!spec.nonlinearity.is_zero()) {
        for (double eps : {0.1, 0.5, 1.0}) {
            EpsilonPair pair{eps, 0.0};
            for (int k = 0; k <= 1200; ++k) {
                const double s = std::pow(10.0, -6.0 + k / 100.0);
                const double v = (1.0 + eps) * spec.nonlinearity.value(s) * s - spec.nonlinearity.derivative(s) * s * s;
                if (std::isfinite(v)) pair.constant = std::max(pair.constant, v);
            }
            rep.pairs.push_back(pair);
        }
    }
    return rep;
}

MultistartCheck multistart_consistency(const ProblemSpec& spec, const IterationControls& controls,
                                       std::vector<double> factors) {
    MultistartCheck mc;
    mc.factors = std::move(factors);
    mc.baseline = solve_minimal(spec, controls);
    mc.consistent = mc.baseline.converged();
    const SampledProblem data = sample(spec);
    const NavierBiharmonicOperator op(spec.grid);
    FieldVector source = data.b;
    source *= spec.lambda;
    const FieldVector u0 = op.solve(source).u;
    const double scale = std::max(mc.baseline.u.max_abs(), 1e-300);
    for (double factor : mc.factors) {
        FieldVector start = u0;
        start *= factor;
        const IterationReport rep = solve_minimal(spec, controls, SolveOptions{start});
        mc.outcomes.push_back(rep.outcome);
        double diff = INFINITY;
        if (rep.converged() && mc.baseline.converged()) {
            diff = kernels::parallel::max_abs_diff(rep.u.values(), mc.baseline.u.values()) / scale;
        }
        mc.differences.push_back(diff);
        if (!(diff <= 1e-8)) mc.consistent = false;
    }
    return mc;
}

}  // namespace biharm

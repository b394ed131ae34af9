#include "biharm/monotone_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "biharm/kernels.hpp"

namespace biharm {

void IterationControls::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("controls.rel_tol must be > 0");
    if (!(u_cap > 0.0)) throw std::invalid_argument("controls.u_cap must be > 0");
    if (max_iter < 2) throw std::invalid_argument("controls.max_iter must be >= 2");
    if (stall_window < 1) throw std::invalid_argument("controls.stall_window must be >= 1");
    if (streak < 1) throw std::invalid_argument("controls.streak must be >= 1");
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Converged: return "Converged";
        case Outcome::Diverged: return "Diverged";
        case Outcome::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

double IterationReport::max_ratio() const {
    return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
}

namespace {

// u_{k+1} = (Delta^2)^{-1}(coeff u_k + scale f(u_k) + source)
struct FixedPointMap {
    const NavierBiharmonicOperator& op;
    FieldVector coeff;
    FieldVector scale;
    const Nonlinearity* f;  // null: no nonlinear term
    FieldVector source;

    FieldVector rhs(const FieldVector& u) const {
        FieldVector out(u.grid());
        if (f) {
            const Nonlinearity& fn = *f;
            kernels::parallel::assemble_rhs(coeff.values(), scale.values(), [&fn](double t) { return fn.value(t); },
                                            u.values(), source.values(), out.values());
        } else {
            kernels::parallel::assemble_rhs(coeff.values(), scale.values(), [](double) { return 0.0; }, u.values(),
                                            source.values(), out.values());
        }
        return out;
    }
};

double weighted_norm_diff(const FieldVector& a, const FieldVector& b) {
    const FieldVector d = a - b;
    return weighted_l2_norm(d);
}

IterationReport iterate(const FixedPointMap& map, const IterationControls& ctl, const std::optional<FieldVector>& start) {
    ctl.validate();
    IterationReport rep;
    const GridPtr& grid = map.op.grid();
    const double source_norm = weighted_l2_norm(map.source);

    FieldVector u;
    FieldVector w;
    double prev_dw = -1.0;  // unknown before the first step
    if (start) {
        require_on_grid(*grid, *start);
        u = *start;
        w = map.op.laplacian().apply(u);
    } else {
        BiharmonicSolution s = map.op.solve(map.source);
        u = std::move(s.u);
        w = std::move(s.w);
        prev_dw = weighted_l2_norm(w);  // u_{-1} = 0
    }
    const double sup0 = u.max_abs();
    rep.sup_norms.push_back(sup0);
    rep.h2_seminorms.push_back(weighted_l2_norm(w));

    FieldVector f_prev = map.rhs(u);
    int small_steps = 0;
    for (int k = 1; k <= ctl.max_iter; ++k) {
        if (!std::isfinite(f_prev.max_abs())) {
            rep.outcome = Outcome::Diverged;
            rep.note = "nonlinearity overflowed at step " + std::to_string(k);
            break;
        }
        BiharmonicSolution next = map.op.solve(f_prev);
        const double sup = next.u.max_abs();
        const double change = kernels::parallel::max_abs_diff(next.u.values(), u.values());

        double min_inc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) min_inc = std::min(min_inc, next.u[i] - u[i]);
        if (sup > 0.0) {
            min_inc /= sup;
            rep.min_increment = std::min(rep.min_increment, min_inc);
            if (min_inc < -1e-12) rep.monotone = false;
        }

        const double dw = weighted_norm_diff(next.w, w);
        const double w_norm = weighted_l2_norm(next.w);
        if (prev_dw > 1e-13 * w_norm) {
            rep.ratios.push_back(dw / prev_dw);
        } else if (prev_dw > 0.0 && dw == 0.0) {
            rep.ratios.push_back(0.0);
        }
        prev_dw = dw;

        u = std::move(next.u);
        w = std::move(next.w);
        rep.iterations = k;
        rep.sup_norms.push_back(sup);
        rep.h2_seminorms.push_back(w_norm);

        if (!std::isfinite(sup) || !std::isfinite(w_norm)) {
            rep.outcome = Outcome::Diverged;
            rep.note = "iterate overflowed at step " + std::to_string(k);
            break;
        }
        if (sup0 > 0.0 && sup > ctl.u_cap * sup0) {
            const int window = std::min(ctl.stall_window, k);
            bool growing = true;
            const std::size_t last = rep.sup_norms.size() - 1;
            for (int j = 0; j < window; ++j) {
                if (rep.sup_norms[last - j] < rep.sup_norms[last - j - 1]) growing = false;
            }
            if (growing) {
                rep.outcome = Outcome::Diverged;
                rep.note = "sup norm exceeded u_cap * sup(u_0) with monotone growth";
                break;
            }
        }

        FieldVector f_next = map.rhs(u);
        const bool exact = change == 0.0;
        small_steps = (exact || change <= ctl.rel_tol * sup) ? small_steps + 1 : 0;
        if (exact || small_steps >= ctl.streak) {
            const double scale = source_norm > 0.0 ? source_norm : std::max(weighted_l2_norm(f_next), 1e-300);
            rep.residual = weighted_norm_diff(f_prev, f_next) / scale;
            if (exact || rep.residual <= 10.0 * ctl.rel_tol) {
                rep.outcome = Outcome::Converged;
                break;
            }
        }
        f_prev = std::move(f_next);
        if (k == ctl.max_iter) rep.note = "max_iter reached without meeting tolerance or cap";
    }
    rep.u = std::move(u);
    rep.w = std::move(w);
    return rep;
}

FixedPointMap linear_map(const NavierBiharmonicOperator& op, const ProblemSpec& spec, const SampledProblem& data,
                         FieldVector source) {
    FieldVector coeff = data.a;
    coeff *= spec.mu;
    return FixedPointMap{op, std::move(coeff), FieldVector(op.grid()), nullptr, std::move(source)};
}

}  // namespace

FieldVector nonlinear_rhs(const ProblemSpec& spec, const SampledProblem& data, const FieldVector& u) {
    FieldVector out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = spec.mu * data.a[i] * u[i] + data.c[i] * spec.nonlinearity.value(u[i]) + spec.lambda * data.b[i];
    }
    return out;
}

IterationReport solve_zeta1(const ProblemSpec& spec, const IterationControls& controls) {
    require_admissible(spec);
    validate_source(spec.source, spec.grid);
    const SampledProblem data = sample(spec);
    const NavierBiharmonicOperator op(spec.grid);
    IterationReport rep = iterate(linear_map(op, spec, data, data.b), controls, std::nullopt);
    if (rep.outcome == Outcome::Diverged) {
        rep.outcome = Outcome::Inconclusive;
        rep.note = "cap tripped in the linear iteration; gamma_hat is likely overestimated (" + rep.note + ")";
    }
    return rep;
}

FieldVector apply_green(const ProblemSpec& spec, const FieldVector& h, const IterationControls& controls) {
    require_admissible(spec);
    require_on_grid(*spec.grid, h);
    if (h.min() < 0.0) throw std::invalid_argument("apply_green: h must be >= 0");
    if (h.max_abs() == 0.0) return FieldVector(spec.grid);
    const SampledProblem data = sample(spec);
    const NavierBiharmonicOperator op(spec.grid);
    IterationReport rep = iterate(linear_map(op, spec, data, h), controls, std::nullopt);
    if (!rep.converged()) throw IterationFailure("apply_green: linear iteration ended " + to_string(rep.outcome), rep);
    return std::move(rep.u);
}

IterationReport solve_minimal(const ProblemSpec& spec, const IterationControls& controls, const SolveOptions& options) {
    require_admissible(spec);
    const SampledProblem data = sample(spec);
    const NavierBiharmonicOperator op(spec.grid);
    FieldVector coeff = data.a;
    coeff *= spec.mu;
    FieldVector source = data.b;
    source *= spec.lambda;
    const FixedPointMap map{op, std::move(coeff), data.c, &spec.nonlinearity, std::move(source)};
    return iterate(map, controls, options.start);
}

ExistenceVerdict check_existence_condition(const ProblemSpec& spec, const FieldVector& zeta1,
                                           const IterationControls& controls, std::vector<double> epsilon_grid) {
    require_on_grid(*spec.grid, zeta1);
    const SampledProblem data = sample(spec);
    if (epsilon_grid.empty()) epsilon_grid = {2.0 * spec.lambda, 1.0, 10.0};

    auto load = [&](double eps) {
        FieldVector h(spec.grid);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = data.c[i] * spec.nonlinearity.value(eps * zeta1[i]);
        return h;
    };
    auto bound = [&](double eps) {
        EpsilonBound b;
        b.epsilon = eps;
        const FieldVector h = load(eps);
        b.l2_finite = std::isfinite(weighted_l2_norm(h));
        if (!b.l2_finite) {
            b.constant = INFINITY;
            return b;
        }
        const FieldVector g = apply_green(spec, h, controls);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (zeta1[i] > 0.0) b.constant = std::max(b.constant, g[i] / zeta1[i]);
        }
        return b;
    };

    ExistenceVerdict v;
    const FieldVector h = load(2.0 * spec.lambda);
    v.l2_finite = std::isfinite(weighted_l2_norm(h));
    if (v.l2_finite && spec.lambda > 0.0) {
        const FieldVector g = apply_green(spec, h, controls);
        v.holds = true;
        const double tol = 1e-12 * spec.lambda * zeta1.max();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double target = spec.lambda * zeta1[i];
            if (target > 0.0) v.margin = std::max(v.margin, g[i] / target);
            if (g[i] > target + tol && v.holds) {
                v.holds = false;
                v.witness = i;
            }
        }
    } else if (spec.lambda == 0.0) {
        v.holds = true;
    }

    for (double eps : epsilon_grid) {
        if (!(eps > 0.0)) continue;
        EpsilonBound b = bound(eps);
        if (b.l2_finite && (!v.best || b.constant < v.best->constant)) v.best = b;
        v.epsilon_bounds.push_back(b);
    }
    return v;
}

MinimalityVerdict check_minimality(const ProblemSpec& spec, const FieldVector& u, const FieldVector& candidate) {
    require_on_grid(*spec.grid, u);
    require_on_grid(*spec.grid, candidate);
    const SampledProblem data = sample(spec);
    const NavierBiharmonicOperator op(spec.grid);
    MinimalityVerdict v;
    const double scale = std::max(candidate.max_abs(), 1e-300);
    const double tol = 1e-8;

    const FieldVector image = op.solve(nonlinear_rhs(spec, data, candidate)).u;
    double defect = INFINITY;
    for (std::size_t i = 0; i < image.size(); ++i) defect = std::min(defect, (candidate[i] - image[i]) / scale);
    v.supersolution_defect = defect;
    v.supersolution = defect >= -tol;
    if (!v.supersolution) return v;

    double gap = INFINITY;
    bool bounded = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double g = (candidate[i] - u[i]) / scale;
        gap = std::min(gap, g);
        if (g < -tol && bounded) {
            bounded = false;
            v.witness = i;
        }
    }
    v.min_gap = gap;
    v.bounded = bounded;
    return v;
}

SandwichCheck check_sandwich(const FieldVector& u, const FieldVector& zeta1, double lambda, double slack) {
    require_same_grid(u, zeta1);
    SandwichCheck c;
    const double scale = std::max(lambda * zeta1.max_abs(), 1e-300);
    c.lower_gap = INFINITY;
    c.upper_gap = INFINITY;
    for (std::size_t i = 0; i < u.size(); ++i) {
        c.lower_gap = std::min(c.lower_gap, (u[i] - lambda * zeta1[i]) / scale);
        c.upper_gap = std::min(c.upper_gap, (2.0 * lambda * zeta1[i] - u[i]) / scale);
    }
    c.lower = c.lower_gap >= -slack;
    c.upper = c.upper_gap >= -slack;
    return c;
}

std::optional<double> find_sandwich_threshold(const ProblemSpec& spec, const FieldVector& zeta1, double start,
                                              const IterationControls& controls) {
    if (!(start > 0.0)) throw std::invalid_argument("find_sandwich_threshold: start must be > 0");
    double lambda = start;
    for (int j = 0; j <= 60; ++j, lambda *= 0.5) {
        ProblemSpec s = spec;
        s.lambda = lambda;
        const IterationReport rep = solve_minimal(s, controls);
        if (rep.converged() && check_sandwich(rep.u, zeta1, lambda).holds()) return lambda;
    }
    return std::nullopt;
}

double weak_form_defect(const ProblemSpec& spec, const FieldVector& u, int count, std::uint64_t seed) {
    require_on_grid(*spec.grid, u);
    const SampledProblem data = sample(spec);
    const NegLaplacianMatrix a(spec.grid);
    const FieldVector au = a.apply(u);
    const FieldVector fu = nonlinear_rhs(spec, data, u);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < count; ++t) {
        FieldVector phi(spec.grid);
        for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = dist(rng);
        const FieldVector aphi = a.apply(phi);
        const double lhs = weighted_l2_inner(au, aphi);
        const double rhs = weighted_l2_inner(fu, phi);
        const double scale = weighted_l2_norm(au) * weighted_l2_norm(aphi) + weighted_l2_norm(fu) * weighted_l2_norm(phi);
        if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

}  // namespace biharm

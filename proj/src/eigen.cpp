#include "biharm/eigen.hpp"

#include <algorithm>
#include <cmath>

#include "biharm/kernels.hpp"

namespace biharm {

WeightedPencil::WeightedPencil(const NavierBiharmonicOperator& op, FieldVector potential,
                               std::optional<FieldVector> mass)
    : op_(&op), potential_(std::move(potential)), mass_(mass ? std::move(*mass) : FieldVector::constant(op.grid(), 1.0)) {
    require_on_grid(*op.grid(), potential_);
    require_on_grid(*op.grid(), mass_);
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        if (!(mass_[i] > 0.0)) throw std::invalid_argument("WeightedPencil: mass must be strictly positive");
    }
}

double WeightedPencil::rayleigh_quotient(const FieldVector& v) const {
    const auto w = op_->grid()->weights();
    const FieldVector av = op_->laplacian().apply(v);
    const double stiffness = kernels::parallel::weighted_dot(w, av.values(), av.values());
    double pot = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        pot += w[i] * potential_[i] * v[i] * v[i];
        mass += w[i] * mass_[i] * v[i] * v[i];
    }
    return (stiffness - pot) / mass;
}

double WeightedPencil::residual(const FieldVector& v, double sigma) const {
    FieldVector rhs(v.grid());
    for (std::size_t i = 0; i < v.size(); ++i) rhs[i] = (potential_[i] + sigma * mass_[i]) * v[i];
    FieldVector defect = v - op_->solve(rhs).u;
    return weighted_l2_norm(defect) / weighted_l2_norm(v);
}

SymmetricPentadiagonal WeightedPencil::shifted_matrix(double shift) const {
    const NegLaplacianMatrix& a = op_->laplacian();
    const auto w = op_->grid()->weights();
    const std::size_t n = a.size();
    std::vector<double> t(n), e(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = w[i] * a.diag()[i];
        if (i + 1 < n) e[i] = 0.5 * (w[i] * a.sup()[i] + w[i + 1] * a.sub()[i + 1]);
    }
    SymmetricPentadiagonal s(n);
    for (std::size_t i = 0; i < n; ++i) {
        double k = t[i] * t[i] / w[i];
        if (i >= 1) k += e[i - 1] * e[i - 1] / w[i - 1];
        if (i + 1 < n) k += e[i] * e[i] / w[i + 1];
        s.diag[i] = k / w[i] - potential_[i] - shift * mass_[i];
        if (i + 1 < n) {
            const double k1 = t[i] * e[i] / w[i] + e[i] * t[i + 1] / w[i + 1];
            s.off1[i] = k1 / std::sqrt(w[i] * w[i + 1]);
        }
        if (i + 2 < n) {
            const double k2 = e[i] * e[i + 1] / w[i + 1];
            s.off2[i] = k2 / std::sqrt(w[i] * w[i + 2]);
        }
    }
    return s;
}

namespace {

struct ShiftedSolver {
    const WeightedPencil* pencil;
    double shift;
    PentadiagonalLdlt factor;
    std::vector<double> sqrt_w;

    // x solving (L - P - sQ) x = Q v
    FieldVector solve_mass(const FieldVector& v) const {
        const std::size_t n = v.size();
        const FieldVector& q = pencil->mass();
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = sqrt_w[i] * q[i] * v[i];
        std::vector<double> z = factor.solve(rhs);
        for (std::size_t i = 0; i < n; ++i) z[i] /= sqrt_w[i];
        return FieldVector(v.grid(), std::move(z));
    }
};

std::vector<double> sqrt_weights(const RadialGrid& g) {
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = std::sqrt(g.weight(i));
    return s;
}

// Q-weighted projection away from the given vectors.
void deflate(FieldVector& x, const std::vector<FieldVector>& basis, const FieldVector& mass) {
    const auto w = x.grid()->weights();
    for (const FieldVector& b : basis) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            num += w[i] * mass[i] * x[i] * b[i];
            den += w[i] * mass[i] * b[i] * b[i];
        }
        x.axpy(-num / den, b);
    }
}

void normalise(FieldVector& v) {
    const double nrm = weighted_l2_norm(v);
    v *= 1.0 / nrm;
}

struct Eigenpair {
    double value;
    FieldVector vector;
    double residual;
    int iterations;
};

// Inverse iteration for the eigenvalue with `index` eigenvalues below it
// (after deflating `basis`). Shifts are accepted only if the factorisation
// shows at most `index` negative pivots.
Eigenpair inverse_iteration(const WeightedPencil& pencil, const EigenOptions& opt, double start_shift,
                            std::size_t index, const std::vector<FieldVector>& basis,
                            std::vector<double>& history) {
    const GridPtr& grid = pencil.op().grid();
    const auto sw = sqrt_weights(*grid);

    double shift = start_shift;
    auto try_factor = [&](double s) -> std::optional<ShiftedSolver> {
        PentadiagonalLdlt f(pencil.shifted_matrix(s));
        if (!f.complete() || f.negative_pivots() > index) return std::nullopt;
        return ShiftedSolver{&pencil, s, std::move(f), sw};
    };

    std::optional<ShiftedSolver> solver = try_factor(shift);
    for (int retry = 0; !solver; ++retry) {
        if (retry >= opt.max_shift_retries) {
            throw EigenError("shifted factorisation failed at every retreating shift", history);
        }
        shift = shift - std::abs(shift) - 1.0;
        history.push_back(shift);
        solver = try_factor(shift);
    }

    FieldVector v = FieldVector::constant(grid, 1.0);
    deflate(v, basis, pencil.mass());
    normalise(v);
    double rho_prev = NAN;
    double theta = 0.9;

    for (int it = 1; it <= opt.max_iter; ++it) {
        FieldVector x = solver->solve_mass(v);
        deflate(x, basis, pencil.mass());
        normalise(x);
        v = std::move(x);
        const double rho = pencil.rayleigh_quotient(v);

        const double residual = pencil.residual(v, rho);

        const double scale = std::max(std::abs(rho), opt.abs_scale);
        if (std::isfinite(rho_prev) && std::abs(rho - rho_prev) <= opt.rel_tol * scale) {
            if (residual <= opt.residual_tol) return {rho, std::move(v), residual, it};
            // The banded solve leaves a smooth low-mode error of order
            // eps ||S|| / gap; split solves remove it without that amplification.
            Eigenpair best{rho, v, residual, it};
            for (int k = 0; k < opt.max_polish; ++k) {
                FieldVector rhs(grid);
                for (std::size_t i = 0; i < rhs.size(); ++i) {
                    rhs[i] = (pencil.potential()[i] + best.value * pencil.mass()[i]) * best.vector[i];
                }
                FieldVector x = pencil.op().solve(rhs).u;
                deflate(x, basis, pencil.mass());
                normalise(x);
                const double rx = pencil.rayleigh_quotient(x);
                const double res = pencil.residual(x, rx);
                if (!(res < best.residual)) break;
                best = {rx, std::move(x), res, it};
                if (res <= opt.residual_tol) return best;
            }
            return best;
        }
        rho_prev = rho;

        // Pull the shift toward the Rayleigh quotient, stopping just short
        // so the factorisation stays regular.
        const double gap_floor = 1e-9 * scale;
        const double target = std::min(solver->shift + theta * (rho - solver->shift), rho - gap_floor);
        if (target > solver->shift) {
            if (auto next = try_factor(target)) {
                solver = std::move(next);
                history.push_back(target);
            } else {
                theta = std::max(theta * 0.5, 1e-3);
            }
        }
    }
    throw EigenError("inverse iteration did not converge", history);
}

}  // namespace

SpectralEstimate smallest_eigenpair(const WeightedPencil& pencil, const EigenOptions& options) {
    SpectralEstimate est;
    est.shift_history.push_back(options.initial_shift);
    Eigenpair first = inverse_iteration(pencil, options, options.initial_shift, 0, {}, est.shift_history);
    if (first.vector[0] < 0.0) first.vector *= -1.0;
    est.eigenvalue = first.value;
    est.residual = first.residual;
    est.iterations = first.iterations;
    est.eigenvector = first.vector;
    est.certified = first.residual <= options.residual_tol;

    if (options.compute_second) {
        std::vector<double> ignored;
        const double start = est.shift_history.back();
        Eigenpair second = inverse_iteration(pencil, options, start, 1, {first.vector}, ignored);
        est.second_eigenvalue = second.value;
    }
    return est;
}

}  // namespace biharm

#include "biharm/operators.hpp"

#include <algorithm>
#include <cmath>

namespace biharm {

NegLaplacianMatrix::NegLaplacianMatrix(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("NegLaplacianMatrix: null grid");
    const RadialGrid& g = *grid_;
    const std::size_t m = g.size();
    const int n = g.dimension();
    const double h = g.spacing();
    sub_.assign(m, 0.0);
    diag_.assign(m, 0.0);
    sup_.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double flux_lo = std::pow(g.lower_face(i), n - 1);
        const double flux_hi = std::pow(g.upper_face(i), n - 1);
        const double scale = 1.0 / (h * h * std::pow(g.node(i), n - 1));
        if (i + 1 < m) {
            diag_[i] = (flux_lo + flux_hi) * scale;
            sup_[i] = -flux_hi * scale;
        } else {
            // ghost u_{M+1} = -u_M puts the zero at r = R
            diag_[i] = (flux_lo + 2.0 * flux_hi) * scale;
        }
        if (i > 0) sub_[i] = -flux_lo * scale;
    }

    pivot_.assign(m, 0.0);
    upper_.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double p = diag_[i];
        if (i > 0) p -= sub_[i] * upper_[i - 1];
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw SolverBreakdown("tridiagonal elimination: non-positive pivot at row " + std::to_string(i));
        }
        pivot_[i] = p;
        upper_[i] = sup_[i] / p;
    }
}

FieldVector NegLaplacianMatrix::apply(const FieldVector& u) const {
    require_on_grid(*grid_, u);
    const std::size_t m = size();
    FieldVector out(grid_);
    for (std::size_t i = 0; i < m; ++i) {
        double s = diag_[i] * u[i];
        if (i > 0) s += sub_[i] * u[i - 1];
        if (i + 1 < m) s += sup_[i] * u[i + 1];
        out[i] = s;
    }
    return out;
}

FieldVector NegLaplacianMatrix::solve(const FieldVector& rhs) const {
    require_on_grid(*grid_, rhs);
    const std::size_t m = size();
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        double v = rhs[i];
        if (i > 0) v -= sub_[i] * y[i - 1];
        y[i] = v / pivot_[i];
    }
    for (std::size_t i = m - 1; i-- > 0;) {
        y[i] -= upper_[i] * y[i + 1];
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw SolverBreakdown("tridiagonal solve produced a non-finite value");
    }
    return FieldVector(grid_, std::move(y));
}

double NegLaplacianMatrix::backward_error(const FieldVector& x, const FieldVector& rhs) const {
    require_on_grid(*grid_, x);
    require_on_grid(*grid_, rhs);
    const std::size_t m = size();
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = diag_[i] * x[i] - rhs[i];
        double scale = std::abs(diag_[i] * x[i]) + std::abs(rhs[i]);
        if (i > 0) {
            r += sub_[i] * x[i - 1];
            scale += std::abs(sub_[i] * x[i - 1]);
        }
        if (i + 1 < m) {
            r += sup_[i] * x[i + 1];
            scale += std::abs(sup_[i] * x[i + 1]);
        }
        if (scale > 0.0) worst = std::max(worst, std::abs(r) / scale);
    }
    return worst;
}

NegLaplacianMatrix::MMatrixCheck NegLaplacianMatrix::check_m_matrix() const {
    MMatrixCheck c;
    const std::size_t m = size();
    auto flag = [&](bool& field, std::size_t row) {
        field = false;
        if (!c.first_bad_row) c.first_bad_row = row;
    };
    for (std::size_t i = 0; i < m; ++i) {
        if (!(diag_[i] > 0.0)) flag(c.positive_diagonal, i);
        if (sub_[i] > 0.0 || sup_[i] > 0.0) flag(c.nonpositive_offdiagonal, i);
        const double off = std::abs(sub_[i]) + std::abs(sup_[i]);
        // relative round-off allowance on the row sum
        if (diag_[i] < off * (1.0 - 1e-12)) flag(c.diagonally_dominant, i);
        if (diag_[i] > off * (1.0 + 1e-12)) c.strictly_dominant_row = true;
        // irreducibility: the chain must be connected
        if (i + 1 < m && (sup_[i] == 0.0 || sub_[i + 1] == 0.0)) flag(c.nonpositive_offdiagonal, i);
    }
    return c;
}

NegLaplacianMatrix assemble_neg_laplacian(GridPtr grid) { return NegLaplacianMatrix(std::move(grid)); }

FieldVector solve_dirichlet(const NegLaplacianMatrix& a, const FieldVector& rhs) { return a.solve(rhs); }

// ---------------------------------------------------------------------------

NavierBiharmonicOperator::NavierBiharmonicOperator(GridPtr grid) : laplacian_(std::move(grid)) {}
NavierBiharmonicOperator::NavierBiharmonicOperator(NegLaplacianMatrix a) : laplacian_(std::move(a)) {}

BiharmonicSolution NavierBiharmonicOperator::solve(const FieldVector& rhs) const {
    FieldVector w = laplacian_.solve(rhs);
    FieldVector u = laplacian_.solve(w);
    return {std::move(u), std::move(w)};
}

FieldVector NavierBiharmonicOperator::apply(const FieldVector& u) const { return laplacian_.apply(laplacian_.apply(u)); }

FieldVector NavierBiharmonicOperator::laplacian_of(const FieldVector& u) const {
    FieldVector lap = laplacian_.apply(u);
    lap *= -1.0;
    return lap;
}

BiharmonicSolution solve_biharmonic_navier(const NavierBiharmonicOperator& b, const FieldVector& rhs) {
    return b.solve(rhs);
}

FieldVector apply_bilaplacian(const NavierBiharmonicOperator& b, const FieldVector& u) { return b.apply(u); }

double discrete_h2_seminorm(const NavierBiharmonicOperator& b, const FieldVector& u) {
    return weighted_l2_norm(b.laplacian().apply(u));
}

double discrete_h2_seminorm(const RadialGrid& g, const FieldVector& u) {
    require_on_grid(g, u);
    return discrete_h2_seminorm(NavierBiharmonicOperator(u.grid()), u);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kComparisonSlack = 1e-10;
constexpr double kSolutionTolerance = 1e-8;

void require_solution(const NavierBiharmonicOperator& b, const FieldVector& u, const FieldVector& rhs,
                      const char* label) {
    const BiharmonicSolution ref = b.solve(rhs);
    const double scale = std::max(ref.u.max_abs(), u.max_abs());
    const double defect = (ref.u - u).max_abs();
    if (scale > 0.0 && defect > kSolutionTolerance * scale) {
        throw NotASolution(std::string("compare: ") + label + " does not solve Delta_h^2 u = rhs (relative defect " +
                           std::to_string(defect / scale) + ")");
    }
}

}  // namespace

OrderingCertificate compare(const NavierBiharmonicOperator& b, const FieldVector& u1, const FieldVector& u2,
                            const FieldVector& rhs1, const FieldVector& rhs2) {
    require_same_grid(u1, u2);
    require_same_grid(u1, rhs1);
    require_same_grid(u1, rhs2);
    require_on_grid(*b.grid(), u1);
    require_solution(b, u1, rhs1, "u1");
    require_solution(b, u2, rhs2, "u2");

    OrderingCertificate cert;
    cert.slack = kComparisonSlack;
    const std::size_t m = u1.size();
    cert.rhs_ordered = true;
    cert.rhs_equal = true;
    for (std::size_t i = 0; i < m; ++i) {
        if (rhs1[i] < rhs2[i]) cert.rhs_ordered = false;
        if (rhs1[i] != rhs2[i]) cert.rhs_equal = false;
    }

    const FieldVector w1 = b.laplacian().apply(u1);
    const FieldVector w2 = b.laplacian().apply(u2);
    const double u_scale = std::max({u1.max_abs(), u2.max_abs(), 1e-300});
    const double w_scale = std::max({w1.max_abs(), w2.max_abs(), 1e-300});

    cert.u_ordered = true;
    cert.w_ordered = true;
    cert.min_u_gap = INFINITY;
    cert.min_w_gap = INFINITY;
    double max_abs_gap = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double du = (u1[i] - u2[i]) / u_scale;
        const double dw = (w1[i] - w2[i]) / w_scale;
        cert.min_u_gap = std::min(cert.min_u_gap, du);
        cert.min_w_gap = std::min(cert.min_w_gap, dw);
        max_abs_gap = std::max({max_abs_gap, std::abs(du), std::abs(dw)});
        if (du < -kComparisonSlack && cert.u_ordered) {
            cert.u_ordered = false;
            if (!cert.first_violation) {
                cert.first_violation = i;
                cert.violating_field = "u";
            }
        }
        if (dw < -kComparisonSlack && cert.w_ordered) {
            cert.w_ordered = false;
            if (!cert.first_violation) {
                cert.first_violation = i;
                cert.violating_field = "w";
            }
        }
    }
    cert.equal = max_abs_gap <= kComparisonSlack;
    return cert;
}

}  // namespace biharm

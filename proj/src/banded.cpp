#include "biharm/banded.hpp"

#include <cmath>
#include <stdexcept>

namespace biharm {

std::vector<double> SymmetricPentadiagonal::multiply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i + 1 < n) s += off1[i] * x[i + 1];
        if (i + 2 < n) s += off2[i] * x[i + 2];
        if (i >= 1) s += off1[i - 1] * x[i - 1];
        if (i >= 2) s += off2[i - 2] * x[i - 2];
        y[i] = s;
    }
    return y;
}

PentadiagonalLdlt::PentadiagonalLdlt(const SymmetricPentadiagonal& s)
    : d_(s.size(), 0.0), l1_(s.size(), 0.0), l2_(s.size(), 0.0) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        double l2 = 0.0;
        double l1 = 0.0;
        if (i >= 2) l2 = s.off2[i - 2] / d_[i - 2];
        if (i >= 1) {
            double v = s.off1[i - 1];
            if (i >= 2) v -= l2 * l1_[i - 1] * d_[i - 2];
            l1 = v / d_[i - 1];
        }
        double d = s.diag[i];
        if (i >= 1) d -= l1 * l1 * d_[i - 1];
        if (i >= 2) d -= l2 * l2 * d_[i - 2];
        l1_[i] = l1;
        l2_[i] = l2;
        d_[i] = d;
        if (!std::isfinite(d) || std::abs(d) <= 1e-14 * std::abs(s.diag[i])) {
            complete_ = false;
            return;
        }
        if (d < 0.0) ++negative_;
    }
}

std::vector<double> PentadiagonalLdlt::solve(std::span<const double> rhs) const {
    if (!complete_) throw std::logic_error("PentadiagonalLdlt::solve on an incomplete factorisation");
    const std::size_t n = d_.size();
    std::vector<double> y(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 1) y[i] -= l1_[i] * y[i - 1];
        if (i >= 2) y[i] -= l2_[i] * y[i - 2];
    }
    for (std::size_t i = 0; i < n; ++i) y[i] /= d_[i];
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) y[i] -= l1_[i + 1] * y[i + 1];
        if (i + 2 < n) y[i] -= l2_[i + 2] * y[i + 2];
    }
    return y;
}

}  // namespace biharm

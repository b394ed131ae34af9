#include "biharm/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace biharm::kernels {

namespace serial {

double weighted_sum(std::span<const double> w, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
    return s;
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * y[i];
    return s;
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace serial

namespace parallel {

namespace {

template <class BlockFn>
double blocked_sum(std::size_t n, BlockFn&& block) {
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
    const auto nb = static_cast<long>(nblocks);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (long b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        partial[static_cast<std::size_t>(b)] = block(lo, hi);
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

}  // namespace

double weighted_sum(std::span<const double> w, std::span<const double> x) {
    return blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += w[i] * x[i];
        return s;
    });
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
    return blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += w[i] * x[i] * y[i];
        return s;
    });
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    const auto n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static) reduction(max : m) if (x.size() >= kParallelMin)
    for (long i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
    double m = 0.0;
    const auto n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static) reduction(max : m) if (x.size() >= kParallelMin)
    for (long i = 0; i < n; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    const auto n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelMin)
    for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace biharm::kernels

/**
 * @file kernels.hpp
 * @brief Data-parallel inner loops with a serial reference implementation.
 *
 * The `serial` namespace holds the straightforward loops that the tests
 * treat as ground truth. The `parallel` namespace holds OpenMP versions.
 * Reductions there sum fixed-size blocks and then combine the block
 * partials in index order, so the result does not depend on the thread
 * count (and is reproducible run to run).
 */
#ifndef BIHARM_KERNELS_HPP
#define BIHARM_KERNELS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace biharm::kernels {

/// Block length used by the blocked reductions.
inline constexpr std::size_t kBlock = 512;
/// Below this length the OpenMP loops run on the calling thread.
inline constexpr std::size_t kParallelMin = 8192;

namespace serial {

double weighted_sum(std::span<const double> w, std::span<const double> x);
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
double max_abs_diff(std::span<const double> x, std::span<const double> y);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// out_i = coeff_i * u_i + scale_i * f(u_i) + source_i
template <class F>
void assemble_rhs(std::span<const double> coeff, std::span<const double> scale, F&& f,
                  std::span<const double> u, std::span<const double> source, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = coeff[i] * u[i] + scale[i] * f(u[i]) + source[i];
    }
}

}  // namespace serial

namespace parallel {

double weighted_sum(std::span<const double> w, std::span<const double> x);
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
double max_abs_diff(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

template <class F>
void assemble_rhs(std::span<const double> coeff, std::span<const double> scale, F&& f,
                  std::span<const double> u, std::span<const double> source, std::span<double> out) {
    const auto n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static) if (u.size() >= kParallelMin)
    for (long i = 0; i < n; ++i) {
        out[i] = coeff[i] * u[i] + scale[i] * f(u[i]) + source[i];
    }
}

}  // namespace parallel

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace biharm::kernels

#endif  // BIHARM_KERNELS_HPP

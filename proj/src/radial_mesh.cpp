#include "biharm/radial_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "biharm/kernels.hpp"

namespace biharm {

std::vector<double> cell_centers(double radius, int cells) {
    if (cells <= 0 || !(radius > 0.0)) {
        throw std::invalid_argument("cell_centers: need R > 0 and M > 0");
    }
    const double h = radius / cells;
    std::vector<double> r(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) r[static_cast<std::size_t>(i)] = (i + 0.5) * h;
    return r;
}

double unit_sphere_measure(int dimension) {
    const double half = 0.5 * dimension;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double ball_volume(int dimension, double radius) {
    return unit_sphere_measure(dimension) * std::pow(radius, dimension) / dimension;
}

RadialGrid::RadialGrid(int dimension, double radius, int cells)
    : dimension_(dimension),
      radius_(radius),
      cells_(cells),
      spacing_(radius / cells),
      sphere_measure_(unit_sphere_measure(dimension)),
      nodes_(cell_centers(radius, cells)),
      weights_(nodes_.size()) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        weights_[i] = sphere_measure_ * std::pow(nodes_[i], dimension - 1) * spacing_;
    }
}

GridPtr build_grid(int dimension, double radius, int cells) {
    if (dimension < 5) {
        throw std::invalid_argument("build_grid: dimension N must be >= 5, got " + std::to_string(dimension));
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("build_grid: radius R must be positive and finite");
    }
    if (cells < 8) {
        throw std::invalid_argument("build_grid: need at least 8 cells, got " + std::to_string(cells));
    }
    return GridPtr(new RadialGrid(dimension, radius, cells));
}

// ---------------------------------------------------------------------------

FieldVector::FieldVector(GridPtr grid) : grid_(std::move(grid)), values_(grid_ ? grid_->size() : 0, 0.0) {}

FieldVector::FieldVector(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_ || values_.size() != grid_->size()) {
        throw GridMismatch("FieldVector: value count does not match grid size");
    }
}

FieldVector FieldVector::constant(GridPtr grid, double value) {
    FieldVector u(std::move(grid));
    std::fill(u.values_.begin(), u.values_.end(), value);
    return u;
}

FieldVector FieldVector::from_radial(GridPtr grid, const std::function<double(double)>& fn) {
    FieldVector u(std::move(grid));
    for (std::size_t i = 0; i < u.size(); ++i) u.values_[i] = fn(u.grid_->node(i));
    return u;
}

void require_same_grid(const FieldVector& u, const FieldVector& v) {
    if (!u.grid() || !v.grid() || !(*u.grid() == *v.grid()) || u.size() != v.size()) {
        throw GridMismatch("grid functions live on different grids");
    }
}

void require_on_grid(const RadialGrid& g, const FieldVector& u) {
    if (!u.grid() || !(*u.grid() == g) || u.size() != g.size()) {
        throw GridMismatch("grid function does not live on the given grid");
    }
}

FieldVector& FieldVector::operator+=(const FieldVector& other) {
    require_same_grid(*this, other);
    kernels::parallel::axpy(1.0, other.values_, values_);
    return *this;
}

FieldVector& FieldVector::operator-=(const FieldVector& other) {
    require_same_grid(*this, other);
    kernels::parallel::axpy(-1.0, other.values_, values_);
    return *this;
}

FieldVector& FieldVector::operator*=(double alpha) {
    for (double& v : values_) v *= alpha;
    return *this;
}

FieldVector& FieldVector::axpy(double alpha, const FieldVector& other) {
    require_same_grid(*this, other);
    kernels::parallel::axpy(alpha, other.values_, values_);
    return *this;
}

double FieldVector::max() const { return *std::max_element(values_.begin(), values_.end()); }
double FieldVector::min() const { return *std::min_element(values_.begin(), values_.end()); }
double FieldVector::max_abs() const { return kernels::parallel::max_abs(values_); }

FieldVector operator+(FieldVector lhs, const FieldVector& rhs) { return lhs += rhs; }
FieldVector operator-(FieldVector lhs, const FieldVector& rhs) { return lhs -= rhs; }
FieldVector operator*(double alpha, FieldVector u) { return u *= alpha; }

double integrate(const RadialGrid& g, const FieldVector& u) {
    require_on_grid(g, u);
    return kernels::parallel::weighted_sum(g.weights(), u.values());
}

double weighted_l2_inner(const RadialGrid& g, const FieldVector& u, const FieldVector& v) {
    require_on_grid(g, u);
    require_on_grid(g, v);
    return kernels::parallel::weighted_dot(g.weights(), u.values(), v.values());
}

double weighted_l2_norm(const RadialGrid& g, const FieldVector& u) {
    return std::sqrt(weighted_l2_inner(g, u, u));
}

double integrate(const FieldVector& u) { return integrate(*u.grid(), u); }
double weighted_l2_inner(const FieldVector& u, const FieldVector& v) { return weighted_l2_inner(*u.grid(), u, v); }
double weighted_l2_norm(const FieldVector& u) { return weighted_l2_norm(*u.grid(), u); }

}  // namespace biharm

/**
 * @file radial_mesh.hpp
 * @brief Cell-centred radial grid on the ball B_R in R^N and grid functions.
 *
 * Radial integrals are carried as genuine volume integrals,
 *   int_{B_R} phi dx = sigma_{N-1} int_0^R phi(r) r^{N-1} dr,
 * approximated by the midpoint rule on cells [(i-1)h, ih].
 */
#ifndef BIHARM_RADIAL_MESH_HPP
#define BIHARM_RADIAL_MESH_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace biharm {

/// Raised when two grid functions live on different grids.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cell centres r_i = (i - 1/2) h, i = 1..M, h = R/M. No restriction on M.
std::vector<double> cell_centers(double radius, int cells);

/// Surface measure of the unit sphere S^{N-1} in R^N.
double unit_sphere_measure(int dimension);

/// Lebesgue measure of the ball of radius R in R^N.
double ball_volume(int dimension, double radius);

class RadialGrid {
public:
    int dimension() const { return dimension_; }
    double radius() const { return radius_; }
    int cells() const { return cells_; }
    std::size_t size() const { return nodes_.size(); }
    double spacing() const { return spacing_; }
    double sphere_measure() const { return sphere_measure_; }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

    /// Face radius between cell i and i+1 (0-based), i.e. (i+1) h.
    double upper_face(std::size_t i) const { return static_cast<double>(i + 1) * spacing_; }
    double lower_face(std::size_t i) const { return static_cast<double>(i) * spacing_; }

    bool operator==(const RadialGrid& other) const {
        return dimension_ == other.dimension_ && radius_ == other.radius_ && cells_ == other.cells_;
    }

private:
    friend std::shared_ptr<const RadialGrid> build_grid(int, double, int);
    RadialGrid(int dimension, double radius, int cells);

    int dimension_;
    double radius_;
    int cells_;
    double spacing_;
    double sphere_measure_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Throws std::invalid_argument unless N >= 5, R > 0, M >= 8.
GridPtr build_grid(int dimension, double radius, int cells);

/// Grid function: one real value per cell, tied to its grid.
class FieldVector {
public:
    FieldVector() = default;
    explicit FieldVector(GridPtr grid);
    FieldVector(GridPtr grid, std::vector<double> values);

    static FieldVector constant(GridPtr grid, double value);
    static FieldVector from_radial(GridPtr grid, const std::function<double(double)>& fn);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& data() const { return values_; }

    FieldVector& operator+=(const FieldVector& other);
    FieldVector& operator-=(const FieldVector& other);
    FieldVector& operator*=(double alpha);

    /// this += alpha * other
    FieldVector& axpy(double alpha, const FieldVector& other);

    double max() const;
    double min() const;
    double max_abs() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

FieldVector operator+(FieldVector lhs, const FieldVector& rhs);
FieldVector operator-(FieldVector lhs, const FieldVector& rhs);
FieldVector operator*(double alpha, FieldVector u);

/// Throws GridMismatch unless both fields share a grid.
void require_same_grid(const FieldVector& u, const FieldVector& v);
void require_on_grid(const RadialGrid& g, const FieldVector& u);

/// Sum_i w_i u_i.
double integrate(const RadialGrid& g, const FieldVector& u);
double weighted_l2_inner(const RadialGrid& g, const FieldVector& u, const FieldVector& v);
double weighted_l2_norm(const RadialGrid& g, const FieldVector& u);

/// Convenience overloads using the field's own grid.
double integrate(const FieldVector& u);
double weighted_l2_inner(const FieldVector& u, const FieldVector& v);
double weighted_l2_norm(const FieldVector& u);

}  // namespace biharm

#endif  // BIHARM_RADIAL_MESH_HPP

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "biharm/radial_mesh.hpp"

using namespace biharm;

TEST_SUITE("radial_mesh") {

TEST_CASE("cell centres sit at the midpoints") {
    const auto r = cell_centers(2.0, 4);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == doctest::Approx(0.25));
    CHECK(r[3] == doctest::Approx(1.75));
}

TEST_CASE("sphere measure and ball volume in five dimensions") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(unit_sphere_measure(5) == doctest::Approx(8.0 * pi2 / 3.0).epsilon(1e-14));
    CHECK(ball_volume(5, 2.0) == doctest::Approx(8.0 * pi2 / 15.0 * 32.0).epsilon(1e-14));
    CHECK(unit_sphere_measure(6) == doctest::Approx(pi2 * std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("quadrature converges to volume integrals at second order") {
    // int_{B_1} |x|^2 dx = sigma / (N + 2) in R^N.
    const int n = 5;
    const double exact = unit_sphere_measure(n) / (n + 2);
    double err[2];
    int k = 0;
    for (int m : {64, 128}) {
        const GridPtr g = build_grid(n, 1.0, m);
        const FieldVector r2 = FieldVector::from_radial(g, [](double r) { return r * r; });
        err[k++] = std::abs(integrate(r2) - exact);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));

    const GridPtr g = build_grid(n, 1.0, 512);
    CHECK(integrate(FieldVector::constant(g, 1.0)) == doctest::Approx(ball_volume(n, 1.0)).epsilon(1e-4));
}

TEST_CASE("weights are sigma r^(N-1) h") {
    const GridPtr g = build_grid(7, 3.0, 30);
    for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(g->weight(i) == doctest::Approx(g->sphere_measure() * std::pow(g->node(i), 6) * g->spacing()));
    }
    CHECK(g->upper_face(0) == doctest::Approx(0.1));
    CHECK(g->lower_face(0) == 0.0);
}

TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_AS(build_grid(4, 1.0, 32), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(5, 0.0, 32), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(5, -1.0, 32), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(5, 1.0, 7), std::invalid_argument);
}

TEST_CASE("field arithmetic and weighted norms") {
    const GridPtr g = build_grid(5, 1.0, 16);
    FieldVector u = FieldVector::constant(g, 2.0);
    FieldVector v = FieldVector::from_radial(g, [](double r) { return r; });
    const FieldVector s = u + v;
    CHECK(s[3] == doctest::Approx(2.0 + g->node(3)));
    u.axpy(-1.0, v);
    CHECK(u[0] == doctest::Approx(2.0 - g->node(0)));
    const FieldVector one = FieldVector::constant(g, 1.0);
    CHECK(weighted_l2_norm(one) == doctest::Approx(std::sqrt(integrate(one))));
    CHECK(weighted_l2_inner(v, one) == doctest::Approx(integrate(v)));
    CHECK((3.0 * one).max() == 3.0);
    CHECK(v.min() == doctest::Approx(g->node(0)));
    CHECK((one - v).max_abs() == doctest::Approx(1.0 - g->node(0)));
}

TEST_CASE("fields on different grids do not mix") {
    const GridPtr g1 = build_grid(5, 1.0, 16);
    const GridPtr g2 = build_grid(5, 1.0, 32);
    FieldVector a = FieldVector::constant(g1, 1.0);
    const FieldVector b = FieldVector::constant(g2, 1.0);
    CHECK_THROWS_AS(a += b, GridMismatch);
    CHECK_THROWS_AS(require_same_grid(a, b), GridMismatch);
    // Equal parameters on separately built grids are the same grid.
    const FieldVector c = FieldVector::constant(build_grid(5, 1.0, 16), 1.0);
    CHECK_NOTHROW(require_same_grid(a, c));
    CHECK_THROWS_AS(FieldVector(g1, std::vector<double>(3, 0.0)), std::invalid_argument);
}

}

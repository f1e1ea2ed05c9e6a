#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <limits>

#include "sesav/helmholtz.hpp"
#include "sesav/rng.hpp"

using namespace sesav;

namespace {

Field random_field(const Grid& grid, std::uint64_t seed) {
    Field f(grid);
    SplitMix64 rng(seed);
    for (double& x : f.values()) x = 2.0 * rng.next_double() - 1.0;
    return f;
}

double max_gap(const Field& a, const Field& b) {
    double m = 0.0;
    auto pa = a.values();
    auto pb = b.values();
    for (std::size_t k = 0; k < pa.size(); ++k) m = std::max(m, std::abs(pa[k] - pb[k]));
    return m;
}

} // namespace

TEST_SUITE("helmholtz") {

TEST_CASE("constant rhs divides by the shift") {
    Grid g(1.0, 8);
    Field rhs(g, 3.0);
    Field sol = helmholtz_solve(g, 1.5, 2.0, rhs);
    for (double x : sol.values()) CHECK(x == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("eigenfield keeps its shape") {
    Grid g(1.0, 4);
    Field rhs(g);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rhs(i, j) = std::sin(2.0 * std::numbers::pi * i / 4.0);
    Field sol = helmholtz_solve(g, 1.0, 1.0, rhs);
    // a - eps2 * lambda = 1 + 32
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(sol(i, j) == doctest::Approx(rhs(i, j) / 33.0).epsilon(1e-13));
}

TEST_CASE("input validation") {
    Grid g(1.0, 4);
    Field rhs(g, 1.0);
    CHECK_THROWS_AS(helmholtz_solve(g, 0.0, 1.0, rhs), std::invalid_argument);
    CHECK_THROWS_AS(helmholtz_solve(g, -2.0, 1.0, rhs), std::invalid_argument);
    CHECK_THROWS_AS(helmholtz_solve(g, 1.0, -1.0, rhs), std::invalid_argument);
    Field bad(g, 1.0);
    bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(helmholtz_solve(g, 1.0, 1.0, bad), std::invalid_argument);
    CHECK_THROWS_AS(helmholtz_solve_dense(Grid(1.0, 33), 1.0, 1.0, Field(Grid(1.0, 33))),
                    std::invalid_argument);
}

TEST_CASE("dense oracle equivalence, resolvent bound, round trip") {
    SplitMix64 param_rng(5);
    for (int m : {2, 4, 8, 16}) {
        Grid g(1.0, m);
        HelmholtzSolver solver(g);
        for (int rep = 0; rep < 10; ++rep) {
            const double a = 0.1 + 9.9 * param_rng.next_double();
            const double eps2 = 5.0 * param_rng.next_double();
            Field rhs = random_field(g, 1000 + 10 * m + rep);

            Field fft_sol = solver.solve(a, eps2, rhs);
            Field dense_sol = helmholtz_solve_dense(g, a, eps2, rhs);
            CHECK(max_gap(fft_sol, dense_sol) <= 1e-12);

            // resolvent bound (infinity norm contraction up to the shift)
            CHECK(norm_inf(fft_sol) <= norm_inf(rhs) / a + 1e-12);

            // apply the operator back: (a I - eps2 lap) sol == rhs
            Field lap = laplacian(fft_sol);
            Field residual(g);
            auto pr = residual.values();
            auto ps = fft_sol.values();
            auto pl = lap.values();
            auto pb = rhs.values();
            for (std::size_t k = 0; k < pr.size(); ++k)
                pr[k] = a * ps[k] - eps2 * pl[k] - pb[k];
            CHECK(norm_inf(residual) <= 1e-12 * std::max(1.0, norm_inf(rhs)));
        }
    }
}

TEST_CASE("dense path handles the degenerate meshes") {
    Grid g1(1.0, 1);
    Field rhs1(g1, 5.0);
    CHECK(helmholtz_solve_dense(g1, 2.0, 3.0, rhs1)(0, 0) == doctest::Approx(2.5));
    CHECK(helmholtz_solve(g1, 2.0, 3.0, rhs1)(0, 0) == doctest::Approx(2.5).epsilon(1e-15));

    Grid g2(1.0, 2);
    Field rhs2 = random_field(g2, 77);
    CHECK(max_gap(helmholtz_solve(g2, 1.0, 1.0, rhs2),
                  helmholtz_solve_dense(g2, 1.0, 1.0, rhs2)) <= 1e-13);
}

TEST_CASE("constant rhs with any eps2 stays in the kernel") {
    Grid g(2.0, 16);
    Field rhs(g, -4.0);
    Field sol = helmholtz_solve(g, 8.0, 123.0, rhs);
    for (double x : sol.values()) CHECK(x == doctest::Approx(-0.5).epsilon(1e-13));
}

} // TEST_SUITE

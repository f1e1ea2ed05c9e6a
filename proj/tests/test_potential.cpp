#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sesav/potential.hpp"
#include "sesav/rng.hpp"

using namespace sesav;

TEST_SUITE("potential") {

TEST_CASE("double-well point values") {
    const PotentialModel dw = PotentialModel::double_well();
    CHECK(dw.f(1.0) == 0.0);
    CHECK(dw.f(0.0) == 0.0);
    CHECK(dw.F(0.5) == doctest::Approx(0.140625).epsilon(1e-15));
    CHECK(dw.df(0.0) == 1.0);
    CHECK(dw.df(1.0) == -2.0);
    CHECK(dw.df(-1.0) == -2.0);
    CHECK(dw.beta() == 1.0);
    CHECK(dw.lipschitz_bound() == 2.0);
    CHECK(dw.c_star() == 0.0);
}

TEST_CASE("flory-huggins constants and domain behavior") {
    CHECK_THROWS_AS(PotentialModel::flory_huggins(1.6, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(PotentialModel::flory_huggins(0.0, 1.0), std::invalid_argument);

    const PotentialModel fh = PotentialModel::flory_huggins(0.8, 1.6);
    CHECK(fh.f(0.0) == 0.0);  // odd function
    CHECK(std::abs(fh.beta() - 0.9575) <= 5e-4);
    CHECK(std::abs(fh.f(fh.beta())) <= 1e-10);
    CHECK(std::abs(fh.lipschitz_bound() - 8.02) <= 0.01);

    // outside (-1,1) the logarithms leave the real line; values propagate as
    // non-finite rather than throwing
    CHECK(!std::isfinite(fh.f(1.0)));
    CHECK(std::isnan(fh.f(1.5)));
    CHECK(std::isnan(fh.F(-1.5)));
}

TEST_CASE("assumption f(beta) <= 0 <= f(-beta)") {
    for (const PotentialModel& m :
         {PotentialModel::double_well(), PotentialModel::flory_huggins(0.8, 1.6)}) {
        CHECK(m.f(m.beta()) <= 1e-10);
        CHECK(m.f(-m.beta()) >= -1e-10);
    }
}

TEST_CASE("c0 values") {
    const PotentialModel dw = PotentialModel::double_well();
    CHECK(dw.c0(2.0) == 2.0);
    CHECK(dw.c0(0.0) == 0.0);

    // brute-force oracle: C0 = max over u of ((kappa/2) u^2 - F(u)) on (-1,1).
    // The maximizer sits within ~1e-10 of u = 1, so refine the coarse scan
    // with a second sweep around its argmax.
    const PotentialModel fh = PotentialModel::flory_huggins(0.8, 1.6);
    const double kappa = 8.02;
    auto objective = [&](double u) { return 0.5 * kappa * u * u - fh.F(u); };
    const int n = 1000000;
    double best = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (int k = 1; k < n; ++k) {
        const double u = -1.0 + 2.0 * k / n;
        if (objective(u) > best) {
            best = objective(u);
            arg = u;
        }
    }
    const double lo = arg - 2.0 / n;
    const double hi = std::min(arg + 2.0 / n, std::nextafter(1.0, 0.0));
    for (int k = 0; k <= n; ++k) {
        const double u = lo + (hi - lo) * k / n;
        best = std::max(best, objective(u));
    }
    CHECK(fh.c0(kappa) == doctest::Approx(best).epsilon(1e-8));
    CHECK(fh.c0(kappa) >= best - 1e-10);
}

TEST_CASE("f is the negative derivative of F (finite differences)") {
    for (const PotentialModel& m :
         {PotentialModel::double_well(), PotentialModel::flory_huggins(0.8, 1.6)}) {
        const double beta = m.beta();
        const double dx = 1e-7;
        for (int k = 1; k < 1000; ++k) {
            const double u = (-beta + 2.0 * beta * k / 1000.0) * 0.999;
            const double fd = -(m.F(u + dx) - m.F(u - dx)) / (2.0 * dx);
            CHECK(m.f(u) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
            const double dfd = (m.f(u + dx) - m.f(u - dx)) / (2.0 * dx);
            CHECK(m.df(u) == doctest::Approx(dfd).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("oddness of f, evenness of F") {
    SplitMix64 rng(3);
    for (const PotentialModel& m :
         {PotentialModel::double_well(), PotentialModel::flory_huggins(0.8, 1.6)}) {
        for (int k = 0; k < 200; ++k) {
            const double u = (2.0 * rng.next_double() - 1.0) * 0.99;
            CHECK(m.f(-u) == doctest::Approx(-m.f(u)).epsilon(1e-13).scale(1.0));
            CHECK(m.F(-u) == doctest::Approx(m.F(u)).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("stabilized reaction bound |f(x) + kappa x| <= kappa beta") {
    SplitMix64 rng(9);
    for (const PotentialModel& m :
         {PotentialModel::double_well(), PotentialModel::flory_huggins(0.8, 1.6)}) {
        const double kappa = m.lipschitz_bound();
        const double beta = m.beta();
        for (int k = 0; k < 1000; ++k) {
            const double x = (2.0 * rng.next_double() - 1.0) * beta;
            CHECK(std::abs(m.f(x) + kappa * x) <= kappa * beta + 1e-12);
        }
    }
}

TEST_CASE("bulk energies over fields") {
    const PotentialModel dw = PotentialModel::double_well();
    Grid g(1.0, 4);
    Field zero(g, 0.0);
    CHECK(bulk_energy(dw, zero) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(shifted_bulk_energy(dw, zero, 0.0) == bulk_energy(dw, zero));

    Grid g1(1.0, 1);
    Field half(g1, 0.5);
    CHECK(shifted_bulk_energy(dw, half, 2.0) == doctest::Approx(-0.109375).epsilon(1e-14));

    // lower bound: bulk >= -c_star * |Omega| for fields within the bound
    const PotentialModel fh = PotentialModel::flory_huggins(0.8, 1.6);
    SplitMix64 rng(21);
    Grid g8(2.0, 8);
    for (int rep = 0; rep < 20; ++rep) {
        Field u(g8);
        for (double& x : u.values()) x = (2.0 * rng.next_double() - 1.0) * fh.beta();
        CHECK(bulk_energy(fh, u) >= -fh.c_star() * 4.0 - 1e-12);
        CHECK(bulk_energy(dw, u) >= -dw.c_star() * 4.0 - 1e-12);
    }
}

TEST_CASE("zero potential is inert") {
    const PotentialModel z = PotentialModel::zero();
    CHECK(z.f(0.7) == 0.0);
    CHECK(z.F(-2.0) == 0.0);
    CHECK(z.df(3.0) == 0.0);
    CHECK(std::isinf(z.beta()));
    CHECK(z.lipschitz_bound() == 0.0);
    Grid g(1.0, 4);
    CHECK(bulk_energy(z, Field(g, 0.3)) == 0.0);
}

} // TEST_SUITE

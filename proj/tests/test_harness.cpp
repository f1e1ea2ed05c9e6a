#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sesav/harness.hpp"
#include "sesav/io.hpp"

using namespace sesav;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "sesav_harness_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("initial data builders") {
    Grid g(1.0, 4);

    InitialCondition sine;
    sine.kind = InitialKind::SmoothSine;
    Field s = build_initial(sine, g);
    CHECK(s(0, 0) == 0.0);
    CHECK(s(1, 1) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(s(1, 3) == doctest::Approx(-0.1).epsilon(1e-14));

    InitialCondition constant;
    constant.kind = InitialKind::Constant;
    constant.value = -0.25;
    Field filled = build_initial(constant, g);
    for (double x : filled.values()) CHECK(x == -0.25);

    InitialCondition random;
    random.kind = InitialKind::UniformRandom;
    random.low = -0.8;
    random.high = 0.8;
    random.seed = 42;
    Field a = build_initial(random, g);
    Field b = build_initial(random, g);
    CHECK(std::memcmp(a.values().data(), b.values().data(), a.values().size() * 8) == 0);
    for (double x : a.values()) {
        CHECK(x >= -0.8);
        CHECK(x < 0.8);
    }
    random.seed = 43;
    Field c = build_initial(random, g);
    CHECK(std::memcmp(a.values().data(), c.values().data(), a.values().size() * 8) != 0);

    InitialCondition bad = random;
    bad.low = 0.8;
    bad.high = -0.8;
    CHECK_THROWS_AS(build_initial(bad, g), std::invalid_argument);
}

TEST_CASE("kappa resolution") {
    const PotentialModel fh = PotentialModel::flory_huggins(0.8, 1.6);
    CHECK(resolve_kappa(KappaSpec::number(3.5), fh) == 3.5);
    CHECK(resolve_kappa(KappaSpec::lipschitz(), fh) == fh.lipschitz_bound());
    CHECK(resolve_kappa(KappaSpec::half_lipschitz(), fh) == 0.5 * fh.lipschitz_bound());
}

TEST_CASE("step-count resolution") {
    RunConfig c;
    c.tau = 0.01;
    c.t_end = 5.0;
    CHECK(resolve_steps(c) == 500);
    c.t_end.reset();
    c.n_steps = 7;
    CHECK(resolve_steps(c) == 7);
    c.t_end = 1.0;  // both set
    CHECK_THROWS_AS(resolve_steps(c), std::invalid_argument);
    c.t_end.reset();
    c.n_steps.reset();
    CHECK_THROWS_AS(resolve_steps(c), std::invalid_argument);
}

TEST_CASE("one-point run reproduces the hand step") {
    RunConfig c;
    c.grid_points = 1;
    c.scheme = SchemeId::Sesav1;
    c.eps = 1.0;
    c.kappa = KappaSpec::number(2.0);
    c.tau = 0.1;
    c.n_steps = 1;
    c.initial.kind = InitialKind::Constant;
    c.initial.value = 0.5;

    const RunResult r = run_simulation(c);
    REQUIRE(r.series.size() == 2);
    CHECK(r.series.back().sup_norm == doctest::Approx(0.53125).epsilon(1e-14));
    CHECK(r.series.back().modified_energy == doctest::Approx(0.12890625).epsilon(1e-14));
    CHECK(r.summary.max_sup_norm == doctest::Approx(0.53125).epsilon(1e-14));
    CHECK(!r.summary.diverged_at);
    CHECK(!r.summary.first_mbp_violation_step);
}

TEST_CASE("zero initial data is a recorded fixed point") {
    RunConfig c;
    c.grid_points = 8;
    c.scheme = SchemeId::Sav2;
    c.eps = 0.01;
    c.kappa = KappaSpec::number(2.0);
    c.tau = 0.05;
    c.n_steps = 100;
    c.stride = 10;
    c.initial.kind = InitialKind::Constant;
    c.initial.value = 0.0;

    const RunResult r = run_simulation(c);
    REQUIRE(r.series.size() == 11);
    const StepDiagnostics& first = r.series.front();
    for (const StepDiagnostics& row : r.series) {
        CHECK(row.sup_norm == first.sup_norm);
        CHECK(row.original_energy == first.original_energy);
        CHECK(row.modified_energy == doctest::Approx(first.modified_energy).epsilon(1e-13));
        CHECK(row.aux == doctest::Approx(first.aux).epsilon(1e-13));
    }
}

TEST_CASE("divergence freezes stepping and is reported") {
    RunConfig c;
    c.potential = PotentialKind::FloryHuggins;
    c.grid_points = 4;
    c.scheme = SchemeId::Esav1;
    c.eps = 0.01;
    c.kappa = KappaSpec::number(8.02);
    c.tau = 0.01;
    c.n_steps = 5;
    c.initial.kind = InitialKind::Constant;
    c.initial.value = 1.5;  // outside the Flory-Huggins domain

    const RunResult r = run_simulation(c);
    REQUIRE(r.summary.diverged_at.has_value());
    CHECK(*r.summary.diverged_at == 0);
    REQUIRE(r.series.size() == 6);
    for (const StepDiagnostics& row : r.series) CHECK(row.diverged);
    CHECK(r.final_state.diverged);
}

TEST_CASE("temporal convergence against the scalar recursion oracle") {
    // zero potential: sESAV1 is backward Euler and sESAV2 is Crank-Nicolson on
    // the smooth_sine eigenfield (lambda = -64 on M=4), so amplitudes obey
    // scalar recursions.
    RunConfig base;
    base.potential = PotentialKind::Zero;
    base.grid_points = 4;
    base.scheme = SchemeId::Sesav1;
    base.eps = 0.125;  // eps^2 * 64 = 1
    base.kappa = KappaSpec::number(0.0);
    base.tau = 0.0625;
    base.t_end = 1.0;
    base.initial.kind = InitialKind::SmoothSine;

    const std::vector<double> taus{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    const double bench_tau = 1.0 / 8192;

    auto amp_be = [](double tau, long n) {
        double c = 1.0;
        for (long k = 0; k < n; ++k) c /= 1.0 + tau;
        return c;
    };
    auto amp_cn = [](double tau, long n) {
        double c = 1.0;
        const double f = (2.0 / tau - 1.0) / (2.0 / tau + 1.0);
        for (long k = 0; k < n; ++k) c *= f;
        return c;
    };

    Grid g(1.0, 4);
    InitialCondition sine;
    const double init_norm = norm2(build_initial(sine, g));
    const double bench_amp = amp_cn(bench_tau, std::lround(1.0 / bench_tau));

    const auto records = convergence_study(base, taus, bench_tau);
    REQUIRE(records.size() == taus.size());
    CHECK(std::isnan(records.front().observed_order));
    for (std::size_t k = 0; k < taus.size(); ++k) {
        const long n = std::lround(1.0 / taus[k]);
        const double expected =
            std::abs(amp_be(taus[k], n) - bench_amp) * init_norm;
        CHECK(records[k].l2_error == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK(std::abs(records.back().observed_order - 1.0) <= 0.05);

    RunConfig base2 = base;
    base2.scheme = SchemeId::Sesav2;
    const auto records2 = convergence_study(base2, taus, bench_tau);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        const long n = std::lround(1.0 / taus[k]);
        const double expected =
            std::abs(amp_cn(taus[k], n) - bench_amp) * init_norm;
        CHECK(records2[k].l2_error == doctest::Approx(expected).epsilon(1e-8));
    }
    CHECK(std::abs(records2.back().observed_order - 2.0) <= 0.1);
}

TEST_CASE("identical runs have zero final-field distance") {
    RunConfig base;
    base.potential = PotentialKind::Zero;
    base.grid_points = 4;
    base.scheme = SchemeId::Sesav2;
    base.eps = 0.125;
    base.kappa = KappaSpec::number(0.0);
    base.tau = 0.25;
    base.t_end = 1.0;
    base.initial.kind = InitialKind::SmoothSine;

    const RunResult a = run_simulation(base);
    const RunResult b = run_simulation(base);
    Field diff(a.final_state.u.grid());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            diff(i, j) = a.final_state.u(i, j) - b.final_state.u(i, j);
    CHECK(norm2(diff) == 0.0);

    // benchmark_tau must be strictly finer than every tau in the list
    CHECK_THROWS_AS(convergence_study(base, std::vector<double>{0.25}, 0.25),
                    std::invalid_argument);
}

TEST_CASE("convergence study rejects diverged runs") {
    RunConfig base;
    base.potential = PotentialKind::FloryHuggins;
    base.grid_points = 4;
    base.scheme = SchemeId::Esav1;
    base.eps = 0.01;
    base.kappa = KappaSpec::number(8.02);
    base.tau = 0.1;
    base.t_end = 0.5;
    base.initial.kind = InitialKind::Constant;
    base.initial.value = 1.5;
    CHECK_THROWS_AS(convergence_study(base, std::vector<double>{0.1}, 0.01),
                    std::runtime_error);
}

TEST_CASE("comparison study covers the scheme-kappa grid deterministically") {
    RunConfig base;
    base.grid_points = 16;
    base.eps = 0.01;
    base.tau = 0.05;
    base.n_steps = 30;
    base.initial.kind = InitialKind::UniformRandom;
    base.initial.seed = 3;

    const std::vector<SchemeId> schemes{SchemeId::Sesav1, SchemeId::Sav1};
    const std::vector<KappaSpec> kappas{KappaSpec::number(1.0), KappaSpec::lipschitz()};
    const ComparisonResult r = comparison_study(base, schemes, kappas);
    REQUIRE(r.table.size() == 4);
    REQUIRE(r.runs.size() == 4);
    CHECK(r.table[0].scheme == SchemeId::Sesav1);
    CHECK(r.table[0].kappa == 1.0);
    CHECK(r.table[1].kappa == 2.0);  // resolved lipschitz bound
    CHECK(r.table[2].scheme == SchemeId::Sav1);

    // stabilized rows never exceed the bound with kappa at the Lipschitz constant
    CHECK(!r.table[1].mbp_violated);
    CHECK(r.table[1].energy_violations == 0);

    const ComparisonResult again = comparison_study(base, schemes, kappas);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(again.table[k].max_sup_norm == r.table[k].max_sup_norm);
        CHECK(again.table[k].final_original_energy == r.table[k].final_original_energy);
    }
}

TEST_CASE("coarsening from a uniform state follows the scalar attractor") {
    RunConfig c;
    c.grid_points = 8;
    c.scheme = SchemeId::Sesav2;
    c.eps = 0.01;
    c.kappa = KappaSpec::number(2.0);
    c.tau = 0.01;
    c.t_end = 40.0;
    c.stride = 500;  // records every 5 time units
    c.steady_tol = 1e-8;
    c.initial.kind = InitialKind::Constant;
    c.initial.value = 0.5;

    const CoarseningResult r = coarsening_study(c);
    REQUIRE(r.steady_time.has_value());
    CHECK(r.final_constant);
    CHECK(r.at_bound);
    CHECK(r.final_mean == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.run.summary.max_energy_increase <= 1e-10);

    RunConfig z = c;
    z.initial.value = 0.0;
    const CoarseningResult rz = coarsening_study(z);
    REQUIRE(rz.steady_time.has_value());
    CHECK(*rz.steady_time == doctest::Approx(5.0));  // first recorded interval
    CHECK(rz.final_constant);
    CHECK(!rz.at_bound);
    CHECK(rz.final_mean == 0.0);
}

TEST_CASE("csv bytes are reproducible and carry the documented schema") {
    RunConfig c;
    c.grid_points = 16;
    c.scheme = SchemeId::Sesav2;
    c.eps = 0.01;
    c.kappa = KappaSpec::lipschitz();
    c.tau = 0.05;
    c.n_steps = 20;
    c.initial.kind = InitialKind::UniformRandom;
    c.initial.seed = 9;

    const RunResult a = run_simulation(c);
    const RunResult b = run_simulation(c);
    CHECK(csv_string(a.series) == csv_string(b.series));
    CHECK(std::memcmp(a.final_state.u.values().data(), b.final_state.u.values().data(),
                      a.final_state.u.values().size() * 8) == 0);

    const std::string text = csv_string(a.series);
    CHECK(text.rfind("step,time,sup_norm,original_energy,modified_energy,aux,g,mbp_ok,diverged\n",
                     0) == 0);

    // SAV rows leave the ratio column blank
    StepDiagnostics row;
    row.step = 3;
    row.time = 0.5;
    row.sup_norm = 0.5;
    row.original_energy = 1.0;
    row.modified_energy = 2.0;
    row.aux = 1.5;
    row.g = std::numeric_limits<double>::quiet_NaN();
    row.mbp_ok = true;
    row.diverged = false;
    const std::string line = csv_string(std::vector<StepDiagnostics>{row});
    CHECK(line.find("3,0.5,0.5,1,2,1.5,,1,0\n") != std::string::npos);
}

TEST_CASE("snapshot format round trip") {
    const fs::path path = temp_dir() / "field.snap";
    Grid g(1.0, 8);
    InitialCondition rnd;
    rnd.kind = InitialKind::UniformRandom;
    rnd.seed = 1234;
    Field u = build_initial(rnd, g);
    write_snapshot(path, u, 2.5);

    // raw header bytes
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    char magic[4];
    std::uint32_t version, m1, m2;
    double time;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&m1), 4);
    in.read(reinterpret_cast<char*>(&m2), 4);
    in.read(reinterpret_cast<char*>(&time), 8);
    CHECK(std::memcmp(magic, "ACFD", 4) == 0);
    CHECK(version == 1);
    CHECK(m1 == 8);
    CHECK(m2 == 8);
    CHECK(time == 2.5);

    double t = 0.0;
    Field back = read_snapshot(path, &t);
    CHECK(t == 2.5);
    REQUIRE(back.points() == 8);
    CHECK(std::memcmp(back.values().data(), u.values().data(), 64 * 8) == 0);
    fs::remove(path);
}

TEST_CASE("run writes csv and snapshot files when configured") {
    const fs::path dir = temp_dir();
    RunConfig c;
    c.grid_points = 4;
    c.scheme = SchemeId::Sesav1;
    c.eps = 0.01;
    c.kappa = KappaSpec::number(2.0);
    c.tau = 0.1;
    c.n_steps = 3;
    c.initial.kind = InitialKind::SmoothSine;
    c.csv_path = (dir / "series.csv").string();
    c.snapshot_path = (dir / "final.snap").string();

    const RunResult r = run_simulation(c);
    REQUIRE(fs::exists(c.csv_path));
    REQUIRE(fs::exists(c.snapshot_path));
    std::ifstream in(c.csv_path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == csv_string(r.series));
    double t = 0.0;
    Field snap = read_snapshot(c.snapshot_path, &t);
    CHECK(t == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(std::memcmp(snap.values().data(), r.final_state.u.values().data(), 16 * 8) == 0);
    fs::remove(c.csv_path);
    fs::remove(c.snapshot_path);
}

} // TEST_SUITE

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sesav/config.hpp"
#include "sesav/io.hpp"
#include "sesav/rng.hpp"

namespace fs = std::filesystem;
using namespace sesav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiverged = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::optional<long> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "path to the run configuration file")
        ->required();
    cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
    cmd->add_option("--set", opts.overrides, "override a config key (key=value, repeatable)");
    cmd->add_option("--seed", opts.seed, "shorthand for --set seed=N");
}

StudyConfig load_config(const CommonOpts& opts) {
    ConfigMap map = parse_config_file(opts.config_path);
    if (opts.seed) apply_override(map, "seed=" + std::to_string(*opts.seed));
    for (const std::string& ov : opts.overrides) apply_override(map, ov);
    return study_config_from(map);
}

// sesav2 keeps the bound only under a step-size restriction; runs beyond it
// are allowed (comparisons deliberately do this) but get flagged.
void warn_if_outside_guarantee(const RunConfig& run) {
    if (run.scheme != SchemeId::Sesav2) return;
    const PotentialModel model = make_model(run);
    if (!std::isfinite(model.beta())) return;
    if (resolve_kappa(run.kappa, model) < model.lipschitz_bound()) return;
    const double h = run.domain_length / run.grid_points;
    const double bound = 1.0 / (0.5 * resolve_kappa(run.kappa, model) +
                                run.eps * run.eps / (h * h));
    if (run.tau > bound)
        std::fprintf(stderr,
                     "warning: sesav2 with tau=%g exceeds the bound-preserving step "
                     "limit %g; the run proceeds without the MBP guarantee\n",
                     run.tau, bound);
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string short_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

void prepare_out(const CommonOpts& opts, RunConfig& run, const char* default_csv) {
    fs::create_directories(opts.out_dir);
    if (run.csv_path.empty()) run.csv_path = default_csv;
    run.csv_path = (fs::path(opts.out_dir) / run.csv_path).string();
    if (!run.snapshot_path.empty())
        run.snapshot_path = (fs::path(opts.out_dir) / run.snapshot_path).string();
}

void print_run_summary(const char* tag, const RunResult& r) {
    std::string line = std::string("[") + tag + "] scheme=" + scheme_name(r.params.scheme) +
                       " steps=" + std::to_string(r.final_state.step_index) +
                       " final_energy=" + num(r.series.back().original_energy) +
                       " sup_norm=" + num(r.summary.max_sup_norm) +
                       " mbp=" + (r.summary.first_mbp_violation_step ? "VIOLATED" : "OK");
    if (r.summary.steady_state_time) line += " steady_t=" + num(*r.summary.steady_state_time);
    if (r.summary.diverged_at)
        line += " diverged_at=" + std::to_string(*r.summary.diverged_at);
    std::printf("%s\n", line.c_str());
}

int cmd_run(const CommonOpts& opts) {
    StudyConfig sc = load_config(opts);
    prepare_out(opts, sc.run, "series.csv");
    warn_if_outside_guarantee(sc.run);
    const RunResult r = run_simulation(sc.run);
    print_run_summary("run", r);
    return r.summary.diverged_at ? kExitDiverged : kExitOk;
}

int cmd_converge(const CommonOpts& opts) {
    StudyConfig sc = load_config(opts);
    if (sc.tau_list.empty()) throw ConfigError("converge requires tau_list");
    if (!sc.has_benchmark_tau) throw ConfigError("converge requires benchmark_tau");
    fs::create_directories(opts.out_dir);

    std::vector<SchemeId> schemes = sc.schemes;
    if (schemes.empty()) schemes.push_back(sc.run.scheme);

    for (SchemeId id : schemes)
        for (double tau : sc.tau_list) {
            RunConfig probe = sc.run;
            probe.scheme = id;
            probe.tau = tau;
            warn_if_outside_guarantee(probe);
        }

    const auto tables = convergence_study_multi(sc.run, schemes, sc.tau_list, sc.benchmark_tau);
    for (std::size_t si = 0; si < schemes.size(); ++si) {
        const std::string name = scheme_name(schemes[si]);
        write_convergence_csv(fs::path(opts.out_dir) / ("convergence_" + name + ".csv"),
                              tables[si]);
        for (const ConvergenceRecord& rec : tables[si]) {
            std::string line = "[converge] scheme=" + name + " tau=" + num(rec.tau) +
                               " error=" + num(rec.l2_error);
            if (!std::isnan(rec.observed_order)) line += " order=" + num(rec.observed_order);
            std::printf("%s\n", line.c_str());
        }
    }
    return kExitOk;
}

int cmd_compare(const CommonOpts& opts) {
    StudyConfig sc = load_config(opts);
    if (sc.schemes.empty()) throw ConfigError("compare requires a schemes array");
    if (sc.kappas.empty()) throw ConfigError("compare requires a kappas array");
    fs::create_directories(opts.out_dir);

    for (SchemeId id : sc.schemes)
        for (const KappaSpec& ks : sc.kappas) {
            RunConfig probe = sc.run;
            probe.scheme = id;
            probe.kappa = ks;
            warn_if_outside_guarantee(probe);
        }

    const ComparisonResult result = comparison_study(sc.run, sc.schemes, sc.kappas);
    write_comparison_csv(fs::path(opts.out_dir) / "comparison.csv", result.table);
    for (std::size_t k = 0; k < result.table.size(); ++k) {
        const ComparisonRow& row = result.table[k];
        const std::string base =
            std::string(scheme_name(row.scheme)) + "_k" + short_num(row.kappa);
        write_csv(fs::path(opts.out_dir) / ("series_" + base + ".csv"),
                  result.runs[k].series);
        std::printf("[compare] scheme=%s kappa=%s max_sup_norm=%s mbp=%s "
                    "energy_violations=%ld diverged=%s\n",
                    scheme_name(row.scheme), short_num(row.kappa).c_str(),
                    num(row.max_sup_norm).c_str(), row.mbp_violated ? "VIOLATED" : "OK",
                    row.energy_violations, row.diverged ? "yes" : "no");
    }
    return kExitOk;
}

int cmd_coarsen(const CommonOpts& opts) {
    StudyConfig sc = load_config(opts);
    prepare_out(opts, sc.run, "series.csv");
    if (sc.run.snapshot_path.empty())
        sc.run.snapshot_path = (fs::path(opts.out_dir) / "final.snap").string();
    warn_if_outside_guarantee(sc.run);

    const CoarseningResult r = coarsening_study(sc.run);
    std::string line = "[coarsen] scheme=" + std::string(scheme_name(r.run.params.scheme));
    line += r.steady_time ? " steady_t=" + num(*r.steady_time) : " steady_t=none";
    line += " final_mean=" + num(r.final_mean);
    line += std::string(" constant=") + (r.final_constant ? "yes" : "no");
    line += std::string(" at_bound=") + (r.at_bound ? "yes" : "no");
    line += " final_energy=" + num(r.run.series.back().original_energy);
    std::printf("%s\n", line.c_str());
    return r.run.summary.diverged_at ? kExitDiverged : kExitOk;
}

bool check(bool ok, const char* what, int& failures) {
    std::printf("[selftest] %-44s %s\n", what, ok ? "ok" : "FAIL");
    if (!ok) ++failures;
    return ok;
}

int cmd_selftest() {
    int failures = 0;

    {
        // summation by parts and solver round trip on a small random mesh
        Grid grid(1.0, 8);
        Field v(grid), w(grid);
        SplitMix64 rng(7);
        for (double& x : v.values()) x = 2.0 * rng.next_double() - 1.0;
        for (double& x : w.values()) x = 2.0 * rng.next_double() - 1.0;
        const double lhs = inner(v, laplacian(w));
        const VectorField gv = gradient(v), gw = gradient(w);
        const double rhs = -(inner(gv.x, gw.x) + inner(gv.y, gw.y));
        check(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)),
              "summation by parts", failures);
        check(inner(v, laplacian(v)) <= 0.0, "laplacian negative semidefinite", failures);

        HelmholtzSolver solver(grid);
        const Field sol = solver.solve(3.0, 0.5, v);
        Field residual = laplacian(sol);
        auto pr = residual.values();
        auto ps = sol.values();
        auto pv = v.values();
        double err = 0.0;
        for (std::size_t k = 0; k < pr.size(); ++k)
            err = std::max(err, std::abs(3.0 * ps[k] - 0.5 * pr[k] - pv[k]));
        check(err <= 1e-12, "helmholtz solve round trip", failures);
        check(norm_inf(sol) <= norm_inf(v) / 3.0 + 1e-12, "resolvent sup-norm bound", failures);

        const Field dense = helmholtz_solve_dense(grid, 3.0, 0.5, v);
        double gap = 0.0;
        auto pd = dense.values();
        for (std::size_t k = 0; k < pd.size(); ++k)
            gap = std::max(gap, std::abs(pd[k] - ps[k]));
        check(gap <= 1e-12, "fft matches dense factorization", failures);
    }

    {
        const PotentialModel dw = PotentialModel::double_well();
        check(dw.beta() == 1.0 && dw.lipschitz_bound() == 2.0, "double-well constants", failures);
        check(std::abs(dw.c0(2.0) - 2.0) == 0.0, "double-well c0(2) = 2", failures);
        const PotentialModel fh = PotentialModel::flory_huggins(0.8, 1.6);
        check(std::abs(fh.beta() - 0.9575) <= 5e-4, "flory-huggins root", failures);
        check(std::abs(fh.lipschitz_bound() - 8.02) <= 0.01, "flory-huggins lipschitz", failures);
    }

    {
        // one-point hand example
        Grid grid(1.0, 1);
        HelmholtzSolver solver(grid);
        const PotentialModel dw = PotentialModel::double_well();
        SchemeParams params{SchemeId::Sesav1, 1.0, 2.0, 0.1, 0.0};
        SchemeState st = init_state(dw, params, Field(grid, 0.5));
        check(aux_ratio(dw, st.u, st.aux) == 1.0, "initial ratio is one", failures);
        st = step_sesav1(st, dw, params, solver);
        check(std::abs(st.u(0, 0) - 0.53125) <= 1e-14 &&
                  std::abs(st.aux - 0.12890625) <= 1e-14,
              "one-point sesav1 step", failures);
    }

    {
        // short stabilized run: bound and energy decay
        RunConfig c;
        c.grid_points = 32;
        c.scheme = SchemeId::Sesav1;
        c.eps = 0.01;
        c.kappa = KappaSpec::lipschitz();
        c.tau = 0.1;
        c.n_steps = 20;
        c.initial.kind = InitialKind::UniformRandom;
        c.initial.seed = 11;
        const RunResult r = run_simulation(c);
        check(r.summary.max_sup_norm <= 1.0 + 1e-12, "sesav1 preserves the bound", failures);
        check(r.summary.max_energy_increase <= 1e-10, "sesav1 energy decays", failures);
        check(!r.summary.diverged_at, "sesav1 run stays finite", failures);
    }

    std::printf("[selftest] %s\n", failures == 0 ? "all checks passed" : "FAILURES detected");
    return failures == 0 ? kExitOk : kExitDiverged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sesav: stabilized exponential-SAV integrators for the 2D periodic "
                 "Allen-Cahn equation"};
    app.require_subcommand(1);

    CommonOpts run_opts, conv_opts, comp_opts, coarse_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "advance a single simulation");
    add_common(run_cmd, run_opts);
    CLI::App* conv_cmd = app.add_subcommand("converge", "temporal convergence study");
    add_common(conv_cmd, conv_opts);
    CLI::App* comp_cmd = app.add_subcommand("compare", "scheme comparison study");
    add_common(comp_cmd, comp_opts);
    CLI::App* coarse_cmd = app.add_subcommand("coarsen", "long-time coarsening run");
    add_common(coarse_cmd, coarse_opts);
    CLI::App* self_cmd = app.add_subcommand("selftest", "run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fflush(stdout);
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts);
        if (conv_cmd->parsed()) return cmd_converge(conv_opts);
        if (comp_cmd->parsed()) return cmd_compare(comp_opts);
        if (coarse_cmd->parsed()) return cmd_coarsen(coarse_opts);
        if (self_cmd->parsed()) return cmd_selftest();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDiverged;
    }
    return kExitUsage;
}

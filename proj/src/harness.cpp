#include "sesav/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "sesav/io.hpp"
#include "sesav/rng.hpp"

namespace sesav {

double resolve_kappa(const KappaSpec& spec, const PotentialModel& model) {
    switch (spec.mode) {
        case KappaSpec::Mode::Value: return spec.value;
        case KappaSpec::Mode::Lipschitz: return model.lipschitz_bound();
        case KappaSpec::Mode::HalfLipschitz: return 0.5 * model.lipschitz_bound();
    }
    return spec.value;
}

Field build_initial(const InitialCondition& init, const Grid& grid) {
    Field u(grid);
    const int m = grid.points();
    switch (init.kind) {
        case InitialKind::SmoothSine: {
            const double two_pi = 2.0 * std::numbers::pi;
            for (int i = 0; i < m; ++i) {
                const double sx = std::sin(two_pi * grid.x(i));
                for (int j = 0; j < m; ++j)
                    u(i, j) = 0.1 * sx * std::sin(two_pi * grid.y(j));
            }
            break;
        }
        case InitialKind::UniformRandom: {
            if (!(init.low < init.high))
                throw std::invalid_argument("build_initial: need low < high");
            SplitMix64 rng(init.seed);
            const double span = init.high - init.low;
            for (double& x : u.values()) x = init.low + span * rng.next_double();
            break;
        }
        case InitialKind::Constant:
            for (double& x : u.values()) x = init.value;
            break;
    }
    return u;
}

PotentialModel make_model(const RunConfig& config) {
    switch (config.potential) {
        case PotentialKind::DoubleWell: return PotentialModel::double_well();
        case PotentialKind::FloryHuggins:
            return PotentialModel::flory_huggins(config.theta, config.theta_c);
        case PotentialKind::Zero: return PotentialModel::zero();
    }
    return PotentialModel::double_well();
}

SchemeParams make_params(const RunConfig& config, const PotentialModel& model) {
    SchemeParams p;
    p.scheme = config.scheme;
    p.eps = config.eps;
    p.kappa = resolve_kappa(config.kappa, model);
    p.tau = config.tau;
    p.delta = is_sav(config.scheme) ? model.c0(p.kappa) + config.delta_offset : 0.0;
    return p;
}

long resolve_steps(const RunConfig& config) {
    if (config.t_end.has_value() == config.n_steps.has_value())
        throw std::invalid_argument("run config: set exactly one of t_end / n_steps");
    if (config.n_steps) {
        if (*config.n_steps < 0) throw std::invalid_argument("run config: n_steps < 0");
        return *config.n_steps;
    }
    return std::lround(*config.t_end / config.tau);
}

RunResult run_simulation(const RunConfig& config) {
    const Grid grid(config.domain_length, config.grid_points);
    const PotentialModel model = make_model(config);
    const SchemeParams params = make_params(config, model);
    const long n_steps = resolve_steps(config);
    const long stride = std::max<long>(1, config.stride);

    HelmholtzSolver solver(grid);
    SchemeState state = init_state(model, params, build_initial(config.initial, grid));

    RunResult result;
    result.params = params;
    result.beta = model.beta();

    RunSummary& sum = result.summary;
    sum.g_min = std::numeric_limits<double>::quiet_NaN();
    sum.g_max = std::numeric_limits<double>::quiet_NaN();
    sum.max_sup_norm = 0.0;
    sum.max_energy_increase = 0.0;

    const bool track_ratio = !is_sav(params.scheme);
    double prev_modified = modified_energy(model, params, state);

    auto absorb = [&](const SchemeState& st) {
        // Per-step summary bookkeeping, independent of the recording stride.
        const double sup = norm_inf(st.u);
        if (std::isfinite(sup)) sum.max_sup_norm = std::max(sum.max_sup_norm, sup);
        if (std::isfinite(model.beta()) && std::isfinite(sup) && sup > model.beta() + 1e-12 &&
            !sum.first_mbp_violation_step)
            sum.first_mbp_violation_step = st.step_index;
        if (track_ratio && !st.diverged) {
            const double g = observed_ratio(model, params, st);
            if (std::isfinite(g)) {
                sum.g_min = std::isnan(sum.g_min) ? g : std::min(sum.g_min, g);
                sum.g_max = std::isnan(sum.g_max) ? g : std::max(sum.g_max, g);
            }
        }
        const double mod = modified_energy(model, params, st);
        if (std::isfinite(mod) && std::isfinite(prev_modified))
            sum.max_energy_increase = std::max(sum.max_energy_increase, mod - prev_modified);
        prev_modified = mod;
        if (st.diverged && !sum.diverged_at) sum.diverged_at = st.step_index;
    };

    absorb(state);  // step 0 seeds the extrema; prev_modified already matches it
    result.series.push_back(make_diagnostics(model, params, state, 0.0));

    double last_recorded_energy = result.series.front().original_energy;
    bool steady_fired = false;

    for (long n = 1; n <= n_steps; ++n) {
        if (!state.diverged) {
            state = step(state, model, params, solver);
            absorb(state);
        } else {
            state.step_index = n;  // frozen state, recorded as diverged rows
        }
        const double t = static_cast<double>(n) * params.tau;
        if (n % stride == 0 || n == n_steps) {
            StepDiagnostics row = make_diagnostics(model, params, state, t);
            result.series.push_back(row);
            if (config.steady_tol && !state.diverged) {
                const double diff = std::abs(row.original_energy - last_recorded_energy);
                if (diff < *config.steady_tol) {
                    sum.steady_state_time = t;
                    steady_fired = true;
                }
            }
            last_recorded_energy = row.original_energy;
            if (steady_fired) break;
        }
    }

    result.final_state = std::move(state);

    if (!config.csv_path.empty()) write_csv(config.csv_path, result.series);
    if (!config.snapshot_path.empty())
        write_snapshot(config.snapshot_path, result.final_state.u,
                       static_cast<double>(result.final_state.step_index) * params.tau);
    return result;
}

std::vector<RunResult> run_many(std::span<const RunConfig> configs) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::vector<RunResult> results(configs.size());
    std::size_t next = 0;
    while (next < configs.size()) {
        const std::size_t batch = std::min<std::size_t>(hw, configs.size() - next);
        std::vector<std::future<RunResult>> futs;
        futs.reserve(batch);
        for (std::size_t k = 0; k < batch; ++k)
            futs.push_back(std::async(std::launch::async,
                                      [&configs, idx = next + k] { return run_simulation(configs[idx]); }));
        for (std::size_t k = 0; k < batch; ++k) results[next + k] = futs[k].get();
        next += batch;
    }
    return results;
}

namespace {

double final_l2_distance(const Field& a, const Field& b) {
    if (!a.same_grid(b)) throw std::invalid_argument("convergence: grid mismatch");
    Field diff(a.grid());
    auto pa = a.values();
    auto pb = b.values();
    auto pd = diff.values();
    for (std::size_t k = 0; k < pd.size(); ++k) pd[k] = pa[k] - pb[k];
    return norm2(diff);
}

} // namespace

std::vector<std::vector<ConvergenceRecord>> convergence_study_multi(
    const RunConfig& base, std::span<const SchemeId> schemes, std::span<const double> tau_list,
    double benchmark_tau) {
    if (tau_list.empty()) throw std::invalid_argument("convergence: empty tau list");
    if (!base.t_end) throw std::invalid_argument("convergence: t_end required");
    for (double t : tau_list)
        if (!(benchmark_tau < t))
            throw std::invalid_argument("convergence: benchmark_tau must be below every tau");

    auto run_one = [&base](SchemeId scheme, double tau) {
        RunConfig c = base;
        c.scheme = scheme;
        c.tau = tau;
        c.n_steps.reset();
        c.stride = std::numeric_limits<long>::max();  // only the final row matters
        c.csv_path.clear();
        c.snapshot_path.clear();
        c.steady_tol.reset();
        RunResult r = run_simulation(c);
        if (r.summary.diverged_at)
            throw std::runtime_error("convergence: run diverged (scheme " +
                                     std::string(scheme_name(scheme)) + ", tau " +
                                     std::to_string(tau) + ")");
        return r;
    };

    const RunResult bench = run_one(SchemeId::Sesav2, benchmark_tau);

    std::vector<std::vector<ConvergenceRecord>> all;
    for (SchemeId scheme : schemes) {
        std::vector<ConvergenceRecord> records;
        for (std::size_t k = 0; k < tau_list.size(); ++k) {
            const RunResult r = run_one(scheme, tau_list[k]);
            ConvergenceRecord rec;
            rec.tau = tau_list[k];
            rec.l2_error = final_l2_distance(r.final_state.u, bench.final_state.u);
            if (k == 0) {
                rec.observed_order = std::numeric_limits<double>::quiet_NaN();
            } else {
                rec.observed_order = std::log(records[k - 1].l2_error / rec.l2_error) /
                                     std::log(tau_list[k - 1] / tau_list[k]);
            }
            records.push_back(rec);
        }
        all.push_back(std::move(records));
    }
    return all;
}

std::vector<ConvergenceRecord> convergence_study(const RunConfig& base,
                                                 std::span<const double> tau_list,
                                                 double benchmark_tau) {
    const SchemeId scheme[] = {base.scheme};
    return convergence_study_multi(base, scheme, tau_list, benchmark_tau).front();
}

ComparisonResult comparison_study(const RunConfig& base, std::span<const SchemeId> schemes,
                                  std::span<const KappaSpec> kappas) {
    std::vector<RunConfig> configs;
    for (SchemeId scheme : schemes) {
        for (const KappaSpec& kappa : kappas) {
            RunConfig c = base;
            c.scheme = scheme;
            c.kappa = kappa;
            c.csv_path.clear();
            c.snapshot_path.clear();
            configs.push_back(std::move(c));
        }
    }

    ComparisonResult result;
    result.runs = run_many(configs);
    for (std::size_t k = 0; k < result.runs.size(); ++k) {
        const RunResult& r = result.runs[k];
        ComparisonRow row;
        row.scheme = configs[k].scheme;
        row.kappa = r.params.kappa;
        row.max_sup_norm = r.summary.max_sup_norm;
        row.mbp_violated = r.summary.first_mbp_violation_step.has_value();
        row.diverged = r.summary.diverged_at.has_value();
        row.final_original_energy = r.series.back().original_energy;

        const double scale =
            std::max(1.0, std::abs(r.series.front().modified_energy));
        long violations = 0;
        for (std::size_t i = 1; i < r.series.size(); ++i) {
            const StepDiagnostics& prev = r.series[i - 1];
            const StepDiagnostics& cur = r.series[i];
            if (!std::isfinite(prev.modified_energy) || !std::isfinite(cur.modified_energy) ||
                prev.diverged || cur.diverged)
                continue;
            if (cur.modified_energy - prev.modified_energy > 1e-10 * scale) ++violations;
        }
        row.energy_violations = violations;
        result.table.push_back(row);
    }
    return result;
}

CoarseningResult coarsening_study(const RunConfig& config) {
    if (!config.steady_tol)
        throw std::invalid_argument("coarsening: steady_tol must be configured");
    CoarseningResult out;
    out.run = run_simulation(config);
    out.steady_time = out.run.summary.steady_state_time;

    const Field& u = out.run.final_state.u;
    double mean = 0.0;
    for (double x : u.values()) mean += x;
    mean /= static_cast<double>(u.grid().cell_count());
    out.final_mean = mean;

    double max_dev = 0.0;
    for (double x : u.values()) max_dev = std::max(max_dev, std::abs(x - mean));
    out.final_constant = std::isfinite(mean) && max_dev <= 1e-6;
    out.at_bound = out.final_constant && std::abs(std::abs(mean) - out.run.beta) <= 1e-6;
    return out;
}

} // namespace sesav

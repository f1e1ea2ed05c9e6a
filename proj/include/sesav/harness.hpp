#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sesav/diagnostics.hpp"

namespace sesav {

enum class InitialKind { SmoothSine, UniformRandom, Constant };

struct InitialCondition {
    InitialKind kind = InitialKind::SmoothSine;
    double low = -0.8;   // uniform range [low, high)
    double high = 0.8;
    double value = 0.0;  // constant fill
    std::uint64_t seed = 1;
};

/// kappa may be given numerically or symbolically relative to the potential.
struct KappaSpec {
    enum class Mode { Value, Lipschitz, HalfLipschitz };
    Mode mode = Mode::Value;
    double value = 0.0;

    static KappaSpec number(double v) { return {Mode::Value, v}; }
    static KappaSpec lipschitz() { return {Mode::Lipschitz, 0.0}; }
    static KappaSpec half_lipschitz() { return {Mode::HalfLipschitz, 0.0}; }
};

double resolve_kappa(const KappaSpec& spec, const PotentialModel& model);

struct RunConfig {
    double domain_length = 1.0;
    int grid_points = 128;

    PotentialKind potential = PotentialKind::DoubleWell;
    double theta = 0.8;
    double theta_c = 1.6;

    SchemeId scheme = SchemeId::Sesav1;
    double eps = 0.01;
    KappaSpec kappa = KappaSpec::number(0.0);
    double tau = 0.01;
    double delta_offset = 0.01;  // SAV: delta = c0 + offset

    std::optional<double> t_end;   // exactly one of t_end / n_steps
    std::optional<long> n_steps;

    InitialCondition initial;
    long stride = 1;  // recording interval in steps
    std::optional<double> steady_tol;

    std::string csv_path;       // empty: no CSV written
    std::string snapshot_path;  // empty: no final-field snapshot written
};

/// Initial data builders. smooth_sine: 0.1 sin(2 pi x) sin(2 pi y);
/// uniform_random: i.i.d. uniform on [low, high) from SplitMix64(seed), one
/// draw per point in row-major order; constant: fill. Throws if low >= high.
Field build_initial(const InitialCondition& init, const Grid& grid);

PotentialModel make_model(const RunConfig& config);
SchemeParams make_params(const RunConfig& config, const PotentialModel& model);
long resolve_steps(const RunConfig& config);

struct RunResult {
    std::vector<StepDiagnostics> series;  // rows at stride intervals plus the final step
    RunSummary summary;
    SchemeState final_state;
    SchemeParams params;  // with kappa/delta resolved
    double beta = 0.0;
};

/// Advances the configured number of steps (or stops early once the steady
/// tolerance fires between recorded rows). Numerical divergence freezes
/// stepping and is reported in the summary, not thrown; I/O failures throw.
RunResult run_simulation(const RunConfig& config);

/// Runs independent configs (possibly concurrently); results are ordered as
/// the inputs regardless of completion order.
std::vector<RunResult> run_many(std::span<const RunConfig> configs);

struct ConvergenceRecord {
    double tau = 0.0;
    double l2_error = 0.0;
    double observed_order = 0.0;  // NaN on the first row
};

/// Temporal convergence against a fine-step sESAV2 benchmark sharing grid,
/// model, kappa, eps and initial data. Requires benchmark_tau < min(tau_list)
/// and t_end set; any diverged run is an error.
std::vector<ConvergenceRecord> convergence_study(const RunConfig& base,
                                                 std::span<const double> tau_list,
                                                 double benchmark_tau);

/// Same study for several schemes sharing one benchmark solution.
std::vector<std::vector<ConvergenceRecord>> convergence_study_multi(
    const RunConfig& base, std::span<const SchemeId> schemes, std::span<const double> tau_list,
    double benchmark_tau);

struct ComparisonRow {
    SchemeId scheme = SchemeId::Sesav1;
    double kappa = 0.0;
    double max_sup_norm = 0.0;
    bool mbp_violated = false;  // observed sup-norm beyond beta at any step
    long energy_violations = 0;
    bool diverged = false;
    double final_original_energy = 0.0;
};

struct ComparisonResult {
    std::vector<ComparisonRow> table;
    std::vector<RunResult> runs;  // one per table row, same order
};

/// One run per (scheme, kappa) pair over the shared base config.
ComparisonResult comparison_study(const RunConfig& base, std::span<const SchemeId> schemes,
                                  std::span<const KappaSpec> kappas);

struct CoarseningResult {
    RunResult run;
    std::optional<double> steady_time;
    bool final_constant = false;  // spatially constant within 1e-6
    double final_mean = 0.0;
    bool at_bound = false;  // |final value| within 1e-6 of beta
};

/// Long-time run with steady-state detection; reports whether the final field
/// is a constant state at +-beta.
CoarseningResult coarsening_study(const RunConfig& config);

} // namespace sesav

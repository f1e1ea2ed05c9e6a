#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sesav/potential.hpp"
#include "sesav/schemes.hpp"

namespace sesav {

/// One recorded moment of a run. `g` carries the exponential ratio for the
/// sESAV and ESAV families and NaN for SAV (serialized as a blank column).
struct StepDiagnostics {
    long step = 0;
    double time = 0.0;
    double sup_norm = 0.0;
    double original_energy = 0.0;
    double modified_energy = 0.0;
    double aux = 0.0;
    double g = 0.0;
    bool mbp_ok = true;
    bool diverged = false;
};

struct RunSummary {
    double g_min = 0.0;  // NaN when the scheme has no ratio (SAV)
    double g_max = 0.0;
    double max_sup_norm = 0.0;
    std::optional<long> first_mbp_violation_step;
    double max_energy_increase = 0.0;  // largest positive per-step jump of the modified energy
    std::optional<double> steady_state_time;
    std::optional<long> diverged_at;
};

/// E_h(u) = (eps^2/2) ||grad_h u||^2 + <F(u), 1>.
double original_energy(const PotentialModel& model, const SchemeParams& params, const Field& u);

/// The scheme's own Lyapunov functional:
///   sESAV: (eps^2/2)||grad u||^2 + s
///   SAV:   (eps^2/2)||grad u||^2 + (kappa/2)||u||^2 + r^2 - delta
///   ESAV:  (eps^2/2)||grad u||^2 + (kappa/2)||u||^2 + ln r
double modified_energy(const PotentialModel& model, const SchemeParams& params,
                       const SchemeState& state);

/// The scheme's exponential ratio at this state (NaN for SAV).
double observed_ratio(const PotentialModel& model, const SchemeParams& params,
                      const SchemeState& state);

struct CheckTolerances {
    double mbp_abs = 1e-12;      // absolute headroom above beta
    double energy_rel = 1e-10;   // relative to energy_scale
    double energy_scale = 1.0;   // max(1, |initial modified energy|)
    bool mbp_guarantee = false;  // caller-resolved via mbp_guaranteed(); gates MBP violations
};

enum class ViolationKind { EnergyIncrease, MbpExceeded, NonFinite };

struct Violation {
    ViolationKind kind;
    long step;
    double value;  // energy jump, sup-norm, or NaN
};

/// Whether the scheme/kappa/tau combination carries a proven MBP guarantee:
/// sESAV1 with kappa >= ||f'|| (any tau); sESAV2 additionally under the
/// practical step bound tau <= (kappa/2 + eps^2/h^2)^{-1}.
bool mbp_guaranteed(const PotentialModel& model, const SchemeParams& params, const Grid& grid);

/// Assertion engine over two consecutive diagnostics rows. Violations are
/// data, not exceptions. Energy comparisons are skipped when either row is
/// non-finite (the non-finite row itself is reported once).
std::vector<Violation> check_step(const PotentialModel& model, const SchemeParams& params,
                                  const StepDiagnostics& prev, const StepDiagnostics& cur,
                                  const CheckTolerances& tol);

/// First recorded time t_{k+1} with |E_h(t_{k+1}) - E_h(t_k)| < tol between
/// consecutive recorded rows; nullopt if the series never settles.
std::optional<double> detect_steady(std::span<const StepDiagnostics> series, double tol);

/// Builds a diagnostics row from a state (computes norms, energies, ratio).
StepDiagnostics make_diagnostics(const PotentialModel& model, const SchemeParams& params,
                                 const SchemeState& state, double time, double mbp_tol = 1e-12);

} // namespace sesav

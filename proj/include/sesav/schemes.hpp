#pragma once

#include <optional>
#include <string_view>

#include "sesav/grid.hpp"
#include "sesav/helmholtz.hpp"
#include "sesav/potential.hpp"

namespace sesav {

enum class SchemeId { Sesav1, Sesav2, Sav1, Sav2, Esav1, Esav2 };

const char* scheme_name(SchemeId id);
std::optional<SchemeId> parse_scheme(std::string_view name);

bool is_sesav(SchemeId id);
bool is_sav(SchemeId id);
bool is_esav(SchemeId id);
bool is_second_order(SchemeId id);

struct SchemeParams {
    SchemeId scheme = SchemeId::Sesav1;
    double eps = 0.01;    // interface parameter
    double kappa = 0.0;   // stabilizing constant, >= 0
    double tau = 0.01;    // time step, > 0
    double delta = 0.0;   // SAV energy shift; must exceed c0(model, kappa)
};

/// One-step state. The meaning of aux depends on the scheme family:
///   sESAV: the auxiliary energy variable s,
///   SAV:   the auxiliary variable r = sqrt-shifted bulk energy,
///   ESAV:  ln r (kept in log form so exp(E2) can never overflow).
struct SchemeState {
    Field u;
    double aux = 0.0;
    long step_index = 0;
    bool diverged = false;
};

/// Half-step predictor output used by the second-order schemes.
struct Predictor {
    Field u_hat;
    double aux_hat = 0.0;
};

/// The positive variable coefficient g(u, s) = exp(s - <F(u),1>), computed as
/// a single exponential of the difference.
double aux_ratio(const PotentialModel& model, const Field& u, double s);

/// Initializes aux per scheme: s0 = <F(u0),1> (sESAV),
/// r0 = sqrt(E2(u0) + delta) (SAV), ln r0 = E2(u0) (ESAV).
/// Throws if params are invalid (tau <= 0, eps <= 0, kappa < 0, or SAV with
/// delta <= c0).
SchemeState init_state(const PotentialModel& model, const SchemeParams& params, Field u0);

SchemeState step_sesav1(const SchemeState& state, const PotentialModel& model,
                        const SchemeParams& params, HelmholtzSolver& solver);
SchemeState step_sesav2(const SchemeState& state, const PotentialModel& model,
                        const SchemeParams& params, HelmholtzSolver& solver);
SchemeState step_sav1(const SchemeState& state, const PotentialModel& model,
                      const SchemeParams& params, HelmholtzSolver& solver);
SchemeState step_sav2(const SchemeState& state, const PotentialModel& model,
                      const SchemeParams& params, HelmholtzSolver& solver);
SchemeState step_esav1(const SchemeState& state, const PotentialModel& model,
                       const SchemeParams& params, HelmholtzSolver& solver);
SchemeState step_esav2(const SchemeState& state, const PotentialModel& model,
                       const SchemeParams& params, HelmholtzSolver& solver);

/// Dispatch on params.scheme; bitwise identical to calling the stepper directly.
SchemeState step(const SchemeState& state, const PotentialModel& model,
                 const SchemeParams& params, HelmholtzSolver& solver);

/// Predictor substeps, exposed so tests can pin intermediate values.
Predictor predict_sesav2(const SchemeState& state, const PotentialModel& model,
                         const SchemeParams& params, HelmholtzSolver& solver);
Predictor predict_esav2(const SchemeState& state, const PotentialModel& model,
                        const SchemeParams& params, HelmholtzSolver& solver);
Field predict_sav2(const SchemeState& state, const PotentialModel& model,
                   const SchemeParams& params, HelmholtzSolver& solver);

} // namespace sesav

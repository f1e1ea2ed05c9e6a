#include "sesav/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace sesav {

double original_energy(const PotentialModel& model, const SchemeParams& params, const Field& u) {
    const double eps2 = params.eps * params.eps;
    return 0.5 * eps2 * gradient_norm_sq(u) + bulk_energy(model, u);
}

double modified_energy(const PotentialModel&, const SchemeParams& params,
                       const SchemeState& state) {
    const double eps2 = params.eps * params.eps;
    const double grad_term = 0.5 * eps2 * gradient_norm_sq(state.u);
    if (is_sesav(params.scheme)) return grad_term + state.aux;
    const double n2 = norm2(state.u);
    const double quad = 0.5 * params.kappa * n2 * n2;
    if (is_sav(params.scheme)) return grad_term + quad + state.aux * state.aux - params.delta;
    return grad_term + quad + state.aux;  // ESAV: aux already stores ln r
}

double observed_ratio(const PotentialModel& model, const SchemeParams& params,
                      const SchemeState& state) {
    if (is_sesav(params.scheme)) return aux_ratio(model, state.u, state.aux);
    if (is_esav(params.scheme))
        return std::exp(state.aux - shifted_bulk_energy(model, state.u, params.kappa));
    return std::numeric_limits<double>::quiet_NaN();
}

bool mbp_guaranteed(const PotentialModel& model, const SchemeParams& params, const Grid& grid) {
    if (!std::isfinite(model.beta())) return false;
    if (!(params.kappa >= model.lipschitz_bound())) return false;
    if (params.scheme == SchemeId::Sesav1) return true;
    if (params.scheme == SchemeId::Sesav2) {
        const double h = grid.spacing();
        const double bound = 1.0 / (0.5 * params.kappa + params.eps * params.eps / (h * h));
        return params.tau <= bound;
    }
    return false;
}

std::vector<Violation> check_step(const PotentialModel& model, const SchemeParams&,
                                  const StepDiagnostics& prev, const StepDiagnostics& cur,
                                  const CheckTolerances& tol) {
    std::vector<Violation> out;
    const bool cur_finite = std::isfinite(cur.sup_norm) && std::isfinite(cur.modified_energy) &&
                            std::isfinite(cur.aux);
    if (!cur_finite || cur.diverged) {
        out.push_back({ViolationKind::NonFinite, cur.step,
                       std::numeric_limits<double>::quiet_NaN()});
        return out;
    }
    const bool prev_finite = std::isfinite(prev.sup_norm) && std::isfinite(prev.modified_energy);
    if (prev_finite && !prev.diverged) {
        const double jump = cur.modified_energy - prev.modified_energy;
        if (jump > tol.energy_rel * tol.energy_scale)
            out.push_back({ViolationKind::EnergyIncrease, cur.step, jump});
    }
    if (tol.mbp_guarantee && std::isfinite(model.beta()) &&
        cur.sup_norm > model.beta() + tol.mbp_abs) {
        out.push_back({ViolationKind::MbpExceeded, cur.step, cur.sup_norm});
    }
    return out;
}

std::optional<double> detect_steady(std::span<const StepDiagnostics> series, double tol) {
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double diff = std::abs(series[k].original_energy - series[k - 1].original_energy);
        if (diff < tol) return series[k].time;
    }
    return std::nullopt;
}

StepDiagnostics make_diagnostics(const PotentialModel& model, const SchemeParams& params,
                                 const SchemeState& state, double time, double mbp_tol) {
    StepDiagnostics d;
    d.step = state.step_index;
    d.time = time;
    d.sup_norm = norm_inf(state.u);
    d.original_energy = original_energy(model, params, state.u);
    d.modified_energy = modified_energy(model, params, state);
    d.aux = state.aux;
    d.g = observed_ratio(model, params, state);
    d.diverged = state.diverged;
    d.mbp_ok = std::isfinite(model.beta()) ? (d.sup_norm <= model.beta() + mbp_tol)
                                           : std::isfinite(d.sup_norm);
    return d;
}

} // namespace sesav

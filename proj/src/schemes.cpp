#include "sesav/schemes.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sesav {

namespace {

Field apply_reaction(const PotentialModel& model, const Field& u) {
    Field out(u.grid());
    auto src = u.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = model.f(src[k]);
    return out;
}

// <v, w> without the h^2 weight applied twice: plain discrete inner product.
double inner_diff(const Field& v, const Field& a, const Field& b) {
    // <v, a - b>
    const double h = v.grid().spacing();
    auto pv = v.values();
    auto pa = a.values();
    auto pb = b.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < pv.size(); ++k) sum += pv[k] * (pa[k] - pb[k]);
    return h * h * sum;
}

SchemeState diverged_successor(const SchemeState& state) {
    SchemeState next{state.u, state.aux, state.step_index + 1, true};
    return next;
}

void require_steppable(const SchemeState& state) {
    if (state.diverged) throw std::invalid_argument("step: state is flagged diverged");
}

bool finite(double x) { return std::isfinite(x); }

} // namespace

const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::Sesav1: return "sesav1";
        case SchemeId::Sesav2: return "sesav2";
        case SchemeId::Sav1: return "sav1";
        case SchemeId::Sav2: return "sav2";
        case SchemeId::Esav1: return "esav1";
        case SchemeId::Esav2: return "esav2";
    }
    return "?";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
    if (name == "sesav1") return SchemeId::Sesav1;
    if (name == "sesav2") return SchemeId::Sesav2;
    if (name == "sav1") return SchemeId::Sav1;
    if (name == "sav2") return SchemeId::Sav2;
    if (name == "esav1") return SchemeId::Esav1;
    if (name == "esav2") return SchemeId::Esav2;
    return std::nullopt;
}

bool is_sesav(SchemeId id) { return id == SchemeId::Sesav1 || id == SchemeId::Sesav2; }
bool is_sav(SchemeId id) { return id == SchemeId::Sav1 || id == SchemeId::Sav2; }
bool is_esav(SchemeId id) { return id == SchemeId::Esav1 || id == SchemeId::Esav2; }
bool is_second_order(SchemeId id) {
    return id == SchemeId::Sesav2 || id == SchemeId::Sav2 || id == SchemeId::Esav2;
}

double aux_ratio(const PotentialModel& model, const Field& u, double s) {
    return std::exp(s - bulk_energy(model, u));
}

SchemeState init_state(const PotentialModel& model, const SchemeParams& params, Field u0) {
    if (!(params.tau > 0.0)) throw std::invalid_argument("init_state: tau must be positive");
    if (!(params.eps > 0.0)) throw std::invalid_argument("init_state: eps must be positive");
    if (!(params.kappa >= 0.0)) throw std::invalid_argument("init_state: kappa must be nonnegative");
    if (!all_finite(u0)) throw std::invalid_argument("init_state: u0 has non-finite entries");

    SchemeState state{std::move(u0), 0.0, 0, false};
    if (is_sesav(params.scheme)) {
        state.aux = bulk_energy(model, state.u);
    } else if (is_sav(params.scheme)) {
        if (!(params.delta > model.c0(params.kappa)))
            throw std::invalid_argument("init_state: SAV requires delta > c0(model, kappa)");
        state.aux = std::sqrt(shifted_bulk_energy(model, state.u, params.kappa) + params.delta);
    } else {
        state.aux = shifted_bulk_energy(model, state.u, params.kappa);  // ln r0 = E2(u0)
    }
    if (!finite(state.aux)) state.diverged = true;
    return state;
}

namespace {

// One sESAV1 update of size tau_eff from (u, s); shared by step_sesav1 and the
// sESAV2 predictor.
bool sesav1_advance(const Field& u, double s, double tau_eff, const PotentialModel& model,
                    const SchemeParams& params, HelmholtzSolver& solver, Field& u_next,
                    double& s_next) {
    const double g = aux_ratio(model, u, s);
    if (!finite(g)) return false;
    const Field fu = apply_reaction(model, u);
    // rhs = u/tau + g f(u) + kappa g u shares its u-coefficient with the operator shift.
    const double a = 1.0 / tau_eff + params.kappa * g;
    Field rhs(u.grid());
    {
        auto pu = u.values();
        auto pf = fu.values();
        auto pr = rhs.values();
        for (std::size_t k = 0; k < pr.size(); ++k) pr[k] = a * pu[k] + g * pf[k];
    }
    if (!finite(a) || !all_finite(rhs)) return false;
    solver.solve(a, params.eps * params.eps, rhs, u_next);
    s_next = s - g * inner_diff(fu, u_next, u);
    return all_finite(u_next) && finite(s_next);
}

} // namespace

SchemeState step_sesav1(const SchemeState& state, const PotentialModel& model,
                        const SchemeParams& params, HelmholtzSolver& solver) {
    require_steppable(state);
    SchemeState next{Field(state.u.grid()), 0.0, state.step_index + 1, false};
    if (!sesav1_advance(state.u, state.aux, params.tau, model, params, solver, next.u, next.aux))
        return diverged_successor(state);
    return next;
}

Predictor predict_sesav2(const SchemeState& state, const PotentialModel& model,
                         const SchemeParams& params, HelmholtzSolver& solver) {
    Predictor p{Field(state.u.grid()), 0.0};
    if (!sesav1_advance(state.u, state.aux, 0.5 * params.tau, model, params, solver, p.u_hat,
                        p.aux_hat))
        throw std::runtime_error("predict_sesav2: predictor diverged");
    return p;
}

SchemeState step_sesav2(const SchemeState& state, const PotentialModel& model,
                        const SchemeParams& params, HelmholtzSolver& solver) {
    require_steppable(state);

    Field u_hat(state.u.grid());
    double s_hat = 0.0;
    if (!sesav1_advance(state.u, state.aux, 0.5 * params.tau, model, params, solver, u_hat, s_hat))
        return diverged_successor(state);

    const double g_hat = aux_ratio(model, u_hat, s_hat);
    if (!finite(g_hat)) return diverged_successor(state);

    const Field f_hat = apply_reaction(model, u_hat);
    const Field lap_u = laplacian(state.u);
    const double eps2 = params.eps * params.eps;
    const double a = 2.0 / params.tau + params.kappa * g_hat;

    Field rhs(state.u.grid());
    {
        auto pu = state.u.values();
        auto pl = lap_u.values();
        auto pf = f_hat.values();
        auto ph = u_hat.values();
        auto pr = rhs.values();
        const double cu = 2.0 / params.tau - params.kappa * g_hat;
        for (std::size_t k = 0; k < pr.size(); ++k)
            pr[k] = cu * pu[k] + eps2 * pl[k] + 2.0 * g_hat * (pf[k] + params.kappa * ph[k]);
    }
    if (!finite(a) || !all_finite(rhs)) return diverged_successor(state);

    SchemeState next{Field(state.u.grid()), 0.0, state.step_index + 1, false};
    solver.solve(a, eps2, rhs, next.u);

    // s update uses f(u_hat) - kappa*(u^{n+1/2} - u_hat) tested against u^{n+1}-u^n.
    double dot = 0.0;
    {
        auto pu = state.u.values();
        auto pn = next.u.values();
        auto pf = f_hat.values();
        auto ph = u_hat.values();
        const double h = state.u.grid().spacing();
        double sum = 0.0;
        for (std::size_t k = 0; k < pu.size(); ++k) {
            const double mid = 0.5 * (pn[k] + pu[k]);
            sum += (pf[k] - params.kappa * (mid - ph[k])) * (pn[k] - pu[k]);
        }
        dot = h * h * sum;
    }
    next.aux = state.aux - g_hat * dot;
    if (!all_finite(next.u) || !finite(next.aux)) next.diverged = true;
    return next;
}

SchemeState step_sav1(const SchemeState& state, const PotentialModel& model,
                      const SchemeParams& params, HelmholtzSolver& solver) {
    require_steppable(state);
    const double eps2 = params.eps * params.eps;
    const double w2 = shifted_bulk_energy(model, state.u, params.kappa) + params.delta;
    if (!(w2 > 0.0) || !finite(w2)) return diverged_successor(state);
    const double w = std::sqrt(w2);

    const Field fu = apply_reaction(model, state.u);
    Field b(state.u.grid());
    {
        auto pu = state.u.values();
        auto pf = fu.values();
        auto pb = b.values();
        for (std::size_t k = 0; k < pb.size(); ++k)
            pb[k] = (pf[k] + params.kappa * pu[k]) / w;
    }
    if (!all_finite(b)) return diverged_successor(state);

    const double a = 1.0 / params.tau + params.kappa;
    Field p(state.u.grid());
    {
        Field rhs(state.u.grid());
        auto pu = state.u.values();
        auto pr = rhs.values();
        for (std::size_t k = 0; k < pr.size(); ++k) pr[k] = pu[k] / params.tau;
        solver.solve(a, eps2, rhs, p);
    }
    Field q = solver.solve(a, eps2, b);

    const double denom = 1.0 + 0.5 * inner(b, q);
    if (denom == 0.0 || !finite(denom)) return diverged_successor(state);
    const double r_next = (state.aux - 0.5 * inner_diff(b, p, state.u)) / denom;

    SchemeState next{Field(state.u.grid()), r_next, state.step_index + 1, false};
    {
        auto pp = p.values();
        auto pq = q.values();
        auto pn = next.u.values();
        for (std::size_t k = 0; k < pn.size(); ++k) pn[k] = pp[k] + r_next * pq[k];
    }
    if (!all_finite(next.u) || !finite(next.aux)) next.diverged = true;
    return next;
}

Field predict_sav2(const SchemeState& state, const PotentialModel& model,
                   const SchemeParams& params, HelmholtzSolver& solver) {
    const double a = 2.0 / params.tau + params.kappa;
    Field rhs(state.u.grid());
    auto pu = state.u.values();
    auto pr = rhs.values();
    for (std::size_t k = 0; k < pr.size(); ++k) pr[k] = a * pu[k] + model.f(pu[k]);
    return solver.solve(a, params.eps * params.eps, rhs);
}

SchemeState step_sav2(const SchemeState& state, const PotentialModel& model,
                      const SchemeParams& params, HelmholtzSolver& solver) {
    require_steppable(state);
    const double eps2 = params.eps * params.eps;
    const double a = 2.0 / params.tau + params.kappa;

    // Predictor: ((2/tau + kappa)I - eps^2 L) u_hat = (2/tau + kappa) u + f(u).
    Field u_hat(state.u.grid());
    {
        Field rhs(state.u.grid());
        auto pu = state.u.values();
        auto pr = rhs.values();
        for (std::size_t k = 0; k < pr.size(); ++k) pr[k] = a * pu[k] + model.f(pu[k]);
        if (!all_finite(rhs)) return diverged_successor(state);
        solver.solve(a, eps2, rhs, u_hat);
    }

    const double w2 = shifted_bulk_energy(model, u_hat, params.kappa) + params.delta;
    if (!(w2 > 0.0) || !finite(w2)) return diverged_successor(state);
    const double w = std::sqrt(w2);

    const Field f_hat = apply_reaction(model, u_hat);
    Field b(state.u.grid());
    {
        auto ph = u_hat.values();
        auto pf = f_hat.values();
        auto pb = b.values();
        for (std::size_t k = 0; k < pb.size(); ++k)
            pb[k] = (pf[k] + params.kappa * ph[k]) / w;
    }
    if (!all_finite(b)) return diverged_successor(state);

    // Crank-Nicolson left-hand operator (2/tau + kappa)I - eps^2 L applied to
    // u^{n+1}; the known part is (2/tau - kappa)u + eps^2 L u.
    Field p(state.u.grid());
    {
        const Field lap_u = laplacian(state.u);
        Field rhs(state.u.grid());
        auto pu = state.u.values();
        auto pl = lap_u.values();
        auto pr = rhs.values();
        const double cu = 2.0 / params.tau - params.kappa;
        for (std::size_t k = 0; k < pr.size(); ++k) pr[k] = cu * pu[k] + eps2 * pl[k];
        solver.solve(a, eps2, rhs, p);
    }
    Field q = solver.solve(a, eps2, b);

    const double bq = 0.5 * inner(b, q);
    const double denom = 1.0 + bq;
    if (denom == 0.0 || !finite(denom)) return diverged_successor(state);
    const double r_next =
        (state.aux * (1.0 - bq) - 0.5 * inner_diff(b, p, state.u)) / denom;

    SchemeState next{Field(state.u.grid()), r_next, state.step_index + 1, false};
    {
        const double rsum = r_next + state.aux;
        auto pp = p.values();
        auto pq = q.values();
        auto pn = next.u.values();
        for (std::size_t k = 0; k < pn.size(); ++k) pn[k] = pp[k] + rsum * pq[k];
    }
    if (!all_finite(next.u) || !finite(next.aux)) next.diverged = true;
    return next;
}

namespace {

// One ESAV1-form update of size tau_eff from (u, ln r); shared by step_esav1
// and the ESAV2 predictor.
bool esav1_advance(const Field& u, double log_r, double tau_eff, const PotentialModel& model,
                   const SchemeParams& params, HelmholtzSolver& solver, Field& u_next,
                   double& log_r_next) {
    const double ratio = std::exp(log_r - shifted_bulk_energy(model, u, params.kappa));
    if (!finite(ratio)) return false;
    const Field fu = apply_reaction(model, u);
    const double inv_tau = 1.0 / tau_eff;
    const double a = inv_tau + params.kappa;
    Field rhs(u.grid());
    Field fku(u.grid());  // f(u) + kappa u, reused in the log update
    {
        auto pu = u.values();
        auto pf = fu.values();
        auto pr = rhs.values();
        auto pk = fku.values();
        for (std::size_t k = 0; k < pr.size(); ++k) {
            pk[k] = pf[k] + params.kappa * pu[k];
            pr[k] = inv_tau * pu[k] + ratio * pk[k];
        }
    }
    if (!all_finite(rhs)) return false;
    solver.solve(a, params.eps * params.eps, rhs, u_next);
    log_r_next = log_r - ratio * inner_diff(fku, u_next, u);
    return all_finite(u_next) && finite(log_r_next);
}

} // namespace

SchemeState step_esav1(const SchemeState& state, const PotentialModel& model,
                       const SchemeParams& params, HelmholtzSolver& solver) {
    require_steppable(state);
    SchemeState next{Field(state.u.grid()), 0.0, state.step_index + 1, false};
    if (!esav1_advance(state.u, state.aux, params.tau, model, params, solver, next.u, next.aux))
        return diverged_successor(state);
    return next;
}

Predictor predict_esav2(const SchemeState& state, const PotentialModel& model,
                        const SchemeParams& params, HelmholtzSolver& solver) {
    Predictor p{Field(state.u.grid()), 0.0};
    if (!esav1_advance(state.u, state.aux, 0.5 * params.tau, model, params, solver, p.u_hat,
                       p.aux_hat))
        throw std::runtime_error("predict_esav2: predictor diverged");
    return p;
}

SchemeState step_esav2(const SchemeState& state, const PotentialModel& model,
                       const SchemeParams& params, HelmholtzSolver& solver) {
    require_steppable(state);

    Field u_hat(state.u.grid());
    double log_r_hat = 0.0;
    if (!esav1_advance(state.u, state.aux, 0.5 * params.tau, model, params, solver, u_hat,
                       log_r_hat))
        return diverged_successor(state);

    const double ratio_hat =
        std::exp(log_r_hat - shifted_bulk_energy(model, u_hat, params.kappa));
    if (!finite(ratio_hat)) return diverged_successor(state);

    const Field f_hat = apply_reaction(model, u_hat);
    const Field lap_u = laplacian(state.u);
    const double eps2 = params.eps * params.eps;
    const double a = 2.0 / params.tau + params.kappa;

    Field rhs(state.u.grid());
    Field fk_hat(state.u.grid());  // f(u_hat) + kappa u_hat
    {
        auto pu = state.u.values();
        auto pl = lap_u.values();
        auto pf = f_hat.values();
        auto ph = u_hat.values();
        auto pr = rhs.values();
        auto pk = fk_hat.values();
        const double cu = 2.0 / params.tau - params.kappa;
        for (std::size_t k = 0; k < pr.size(); ++k) {
            pk[k] = pf[k] + params.kappa * ph[k];
            pr[k] = cu * pu[k] + eps2 * pl[k] + 2.0 * ratio_hat * pk[k];
        }
    }
    if (!all_finite(rhs)) return diverged_successor(state);

    SchemeState next{Field(state.u.grid()), 0.0, state.step_index + 1, false};
    solver.solve(a, eps2, rhs, next.u);
    next.aux = state.aux - ratio_hat * inner_diff(fk_hat, next.u, state.u);
    if (!all_finite(next.u) || !finite(next.aux)) next.diverged = true;
    return next;
}

SchemeState step(const SchemeState& state, const PotentialModel& model,
                 const SchemeParams& params, HelmholtzSolver& solver) {
    switch (params.scheme) {
        case SchemeId::Sesav1: return step_sesav1(state, model, params, solver);
        case SchemeId::Sesav2: return step_sesav2(state, model, params, solver);
        case SchemeId::Sav1: return step_sav1(state, model, params, solver);
        case SchemeId::Sav2: return step_sav2(state, model, params, solver);
        case SchemeId::Esav1: return step_esav1(state, model, params, solver);
        case SchemeId::Esav2: return step_esav2(state, model, params, solver);
    }
    throw std::invalid_argument("step: unknown scheme id");
}

} // namespace sesav

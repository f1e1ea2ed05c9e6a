#include "sesav/potential.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace sesav {

namespace {

// Bisection on a monotone sign change; bracket must satisfy fn(lo)*fn(hi) < 0.
double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (!(flo == 0.0 || fhi == 0.0 || (flo > 0.0) != (fhi > 0.0)))
        throw std::runtime_error("bisect: no sign change bracketed");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

constexpr double kRootTol = 1e-12;

} // namespace

PotentialModel PotentialModel::double_well() {
    PotentialModel m;
    m.kind_ = PotentialKind::DoubleWell;
    m.beta_ = 1.0;
    m.lipschitz_ = 2.0;  // max of |1 - 3u^2| on [-1,1]
    m.c_star_ = 0.0;     // F >= 0 everywhere
    return m;
}

PotentialModel PotentialModel::flory_huggins(double theta, double theta_c) {
    if (!(theta_c > theta && theta > 0.0))
        throw std::invalid_argument("flory_huggins: requires theta_c > theta > 0");
    PotentialModel m;
    m.kind_ = PotentialKind::FloryHuggins;
    m.theta_ = theta;
    m.theta_c_ = theta_c;
    // f is positive just right of 0 ((theta_c - theta)u + O(u^3)) and tends to
    // -inf as u -> 1, so the positive root lies strictly inside (0,1).
    const double hi = std::nextafter(1.0, 0.0);
    m.beta_ = bisect([&m](double u) { return m.f(u); }, 1e-12, hi, kRootTol);
    // f' = theta_c - theta/(1-u^2) is even and decreasing in |u|, so the
    // extremes on [-beta, beta] are at 0 and +-beta.
    const double at0 = std::abs(theta_c - theta);
    const double atb = std::abs(theta_c - theta / (1.0 - m.beta_ * m.beta_));
    m.lipschitz_ = std::max(at0, atb);
    // Interior critical points of F are the roots of f (0 and +-beta), so the
    // minimum of F over [-beta, beta] is min(F(0), F(beta)) = F(beta) here.
    m.c_star_ = std::max(0.0, -std::min(m.F(0.0), m.F(m.beta_)));
    return m;
}

PotentialModel PotentialModel::zero() {
    PotentialModel m;
    m.kind_ = PotentialKind::Zero;
    m.beta_ = std::numeric_limits<double>::infinity();
    m.lipschitz_ = 0.0;
    m.c_star_ = 0.0;
    return m;
}

double PotentialModel::f(double u) const {
    switch (kind_) {
        case PotentialKind::DoubleWell:
            return u - u * u * u;
        case PotentialKind::FloryHuggins:
            return 0.5 * theta_ * std::log((1.0 - u) / (1.0 + u)) + theta_c_ * u;
        case PotentialKind::Zero:
            return 0.0;
    }
    return 0.0;
}

double PotentialModel::F(double u) const {
    switch (kind_) {
        case PotentialKind::DoubleWell: {
            const double w = u * u - 1.0;
            return 0.25 * w * w;
        }
        case PotentialKind::FloryHuggins:
            return 0.5 * theta_ * ((1.0 + u) * std::log(1.0 + u) + (1.0 - u) * std::log(1.0 - u)) -
                   0.5 * theta_c_ * u * u;
        case PotentialKind::Zero:
            return 0.0;
    }
    return 0.0;
}

double PotentialModel::df(double u) const {
    switch (kind_) {
        case PotentialKind::DoubleWell:
            return 1.0 - 3.0 * u * u;
        case PotentialKind::FloryHuggins:
            return theta_c_ - theta_ / (1.0 - u * u);
        case PotentialKind::Zero:
            return 0.0;
    }
    return 0.0;
}

double PotentialModel::c0(double kappa) const {
    if (!(kappa >= 0.0)) throw std::invalid_argument("c0: kappa must be nonnegative");
    switch (kind_) {
        case PotentialKind::DoubleWell:
            return 0.25 * (kappa * kappa + 2.0 * kappa);
        case PotentialKind::FloryHuggins: {
            // alpha > 0 solves f(alpha) + kappa*alpha = 0; same bracket as beta.
            const double hi = std::nextafter(1.0, 0.0);
            const double alpha =
                bisect([this, kappa](double u) { return f(u) + kappa * u; }, 1e-12, hi, kRootTol);
            return -F(alpha) + 0.5 * kappa * alpha * alpha;
        }
        case PotentialKind::Zero:
            return 0.0;
    }
    return 0.0;
}

double bulk_energy(const PotentialModel& model, const Field& u) {
    const double h = u.grid().spacing();
    double sum = 0.0;
    for (double x : u.values()) sum += model.F(x);
    return h * h * sum;
}

double shifted_bulk_energy(const PotentialModel& model, const Field& u, double kappa) {
    const double n2 = norm2(u);
    return bulk_energy(model, u) - 0.5 * kappa * n2 * n2;
}

} // namespace sesav

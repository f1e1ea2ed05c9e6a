#pragma once

#include "sesav/grid.hpp"

namespace sesav {

enum class PotentialKind { DoubleWell, FloryHuggins, Zero };

/// Nonlinear reaction term f = -F' and potential density F, together with the
/// derived constants used by the schemes:
///   beta       positive root of f (the bound preserved by the MBP),
///   lipschitz  max |f'| on [-beta, beta],
///   c_star     max(0, -min F on [-beta, beta]).
///
/// DoubleWell:    F(u) = (u^2-1)^2/4,  f(u) = u - u^3,          beta = 1.
/// FloryHuggins:  F(u) = (theta/2)[(1+u)ln(1+u) + (1-u)ln(1-u)] - (theta_c/2)u^2,
///                f(u) = (theta/2)ln((1-u)/(1+u)) + theta_c*u,  requires theta_c > theta > 0.
///                Evaluation at |u| >= 1 yields IEEE non-finite values (no throw);
///                downstream code treats those as divergence.
/// Zero:          f = F = 0; test-only model with beta = +infinity.
class PotentialModel {
public:
    static PotentialModel double_well();
    static PotentialModel flory_huggins(double theta, double theta_c);
    static PotentialModel zero();

    PotentialKind kind() const { return kind_; }
    double theta() const { return theta_; }
    double theta_c() const { return theta_c_; }

    double f(double u) const;   // reaction term, -F'
    double F(double u) const;   // potential density
    double df(double u) const;  // f'

    double beta() const { return beta_; }
    double lipschitz_bound() const { return lipschitz_; }
    double c_star() const { return c_star_; }

    /// Lower-bound constant C0 for the shifted bulk energy: the SAV schemes
    /// need delta > C0. DoubleWell: (kappa^2 + 2 kappa)/4. FloryHuggins: with
    /// alpha in (0,1) solving f(alpha) + kappa*alpha = 0, C0 = -F(alpha) +
    /// (kappa/2) alpha^2. Zero: 0 (only meaningful with kappa = 0).
    double c0(double kappa) const;

private:
    PotentialModel() = default;

    PotentialKind kind_ = PotentialKind::DoubleWell;
    double theta_ = 0.0;
    double theta_c_ = 0.0;
    double beta_ = 1.0;
    double lipschitz_ = 2.0;
    double c_star_ = 0.0;
};

/// Bulk part of the discrete energy, <F(u), 1>.
double bulk_energy(const PotentialModel& model, const Field& u);

/// SAV-shifted bulk energy, <F(u) - (kappa/2) u^2, 1> = bulk - (kappa/2)||u||^2.
double shifted_bulk_energy(const PotentialModel& model, const Field& u, double kappa);

} // namespace sesav

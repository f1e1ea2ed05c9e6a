#pragma once

#include <memory>

#include "sesav/grid.hpp"

namespace sesav {

/// Inverts the shifted operator a*I - eps2*Laplacian_h on a periodic grid by
/// 2D FFT diagonalization. The operator eigenvalues are
///   a - eps2 * lambda_kl,  lambda_kl = -(4/h^2)(sin^2(pi k/M) + sin^2(pi l/M)),
/// so the solve is exact up to roundoff.
///
/// A solver instance owns its FFT plans and work buffers. Instances must not be
/// shared across threads mid-operation; distinct instances are independent
/// (plan creation is internally serialized).
class HelmholtzSolver {
public:
    explicit HelmholtzSolver(const Grid& grid);
    ~HelmholtzSolver();

    HelmholtzSolver(const HelmholtzSolver&) = delete;
    HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

    const Grid& grid() const;

    /// Requires a > 0, eps2 >= 0, finite rhs; output is real (imaginary residue
    /// of the inverse transform is discarded by construction of the r2c pair).
    void solve(double a, double eps2, const Field& rhs, Field& out);
    Field solve(double a, double eps2, const Field& rhs);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around HelmholtzSolver.
Field helmholtz_solve(const Grid& grid, double a, double eps2, const Field& rhs);

/// Test oracle: assembles the M^2 x M^2 matrix a*I - eps2*Laplacian_h and
/// solves by direct factorization. Guarded to M <= 32. Unlike the FFT path,
/// eps2 may be negative here; a singular system is an error.
Field helmholtz_solve_dense(const Grid& grid, double a, double eps2, const Field& rhs);

} // namespace sesav

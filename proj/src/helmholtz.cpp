#include "sesav/helmholtz.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sesav {

namespace {

// FFTW's planner is not thread-safe; execution on private buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void check_inputs(double a, const Field& rhs) {
    if (!(a > 0.0)) throw std::invalid_argument("helmholtz: a must be positive");
    if (!all_finite(rhs)) throw std::invalid_argument("helmholtz: rhs has non-finite entries");
}

} // namespace

struct HelmholtzSolver::Impl {
    Grid grid;
    std::vector<double> neg_eig;  // -lambda_k along one axis: (4/h^2) sin^2(pi k/M)
    double* real_buf = nullptr;
    fftw_complex* freq_buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit Impl(const Grid& g) : grid(g) {
        const int m = grid.points();
        const int mc = m / 2 + 1;
        const double h = grid.spacing();
        neg_eig.resize(m);
        for (int k = 0; k < m; ++k) {
            const double s = std::sin(std::numbers::pi * k / m);
            neg_eig[k] = 4.0 / (h * h) * s * s;
        }
        real_buf = fftw_alloc_real(static_cast<std::size_t>(m) * m);
        freq_buf = fftw_alloc_complex(static_cast<std::size_t>(m) * mc);
        std::lock_guard<std::mutex> lock(planner_mutex());
        // FFTW_ESTIMATE keeps plan selection deterministic run-to-run.
        fwd = fftw_plan_dft_r2c_2d(m, m, real_buf, freq_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(m, m, freq_buf, real_buf, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("helmholtz: FFTW plan creation failed");
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(freq_buf);
    }
};

HelmholtzSolver::HelmholtzSolver(const Grid& grid) : impl_(std::make_unique<Impl>(grid)) {}
HelmholtzSolver::~HelmholtzSolver() = default;

const Grid& HelmholtzSolver::grid() const { return impl_->grid; }

void HelmholtzSolver::solve(double a, double eps2, const Field& rhs, Field& out) {
    check_inputs(a, rhs);
    if (eps2 < 0.0) throw std::invalid_argument("helmholtz: eps2 must be nonnegative");
    if (!(rhs.grid() == impl_->grid)) throw std::invalid_argument("helmholtz: rhs grid mismatch");

    const int m = impl_->grid.points();
    const int mc = m / 2 + 1;
    const auto src = rhs.values();
    std::copy(src.begin(), src.end(), impl_->real_buf);
    fftw_execute(impl_->fwd);

    const double norm = 1.0 / (static_cast<double>(m) * m);
    for (int k = 0; k < m; ++k) {
        const double ek = impl_->neg_eig[k];
        fftw_complex* row = impl_->freq_buf + static_cast<std::size_t>(k) * mc;
        for (int l = 0; l < mc; ++l) {
            const double denom = a + eps2 * (ek + impl_->neg_eig[l]);
            const double scale = norm / denom;
            row[l][0] *= scale;
            row[l][1] *= scale;
        }
    }

    fftw_execute(impl_->bwd);
    if (!(out.grid() == impl_->grid)) out = Field(impl_->grid);
    auto dst = out.values();
    std::copy(impl_->real_buf, impl_->real_buf + dst.size(), dst.begin());
}

Field HelmholtzSolver::solve(double a, double eps2, const Field& rhs) {
    Field out(impl_->grid);
    solve(a, eps2, rhs, out);
    return out;
}

Field helmholtz_solve(const Grid& grid, double a, double eps2, const Field& rhs) {
    HelmholtzSolver solver(grid);
    return solver.solve(a, eps2, rhs);
}

Field helmholtz_solve_dense(const Grid& grid, double a, double eps2, const Field& rhs) {
    check_inputs(a, rhs);
    const int m = grid.points();
    if (m > 32) throw std::invalid_argument("helmholtz_solve_dense: grid too large (M <= 32)");
    if (!(rhs.grid() == grid)) throw std::invalid_argument("helmholtz_solve_dense: rhs grid mismatch");

    const int n = m * m;
    const double c = eps2 / (grid.spacing() * grid.spacing());
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const int row = i * m + j;
            mat(row, row) += a + 4.0 * c;
            const int nb[4] = {((i + 1) % m) * m + j, ((i + m - 1) % m) * m + j,
                               i * m + (j + 1) % m, i * m + (j + m - 1) % m};
            for (int col : nb) mat(row, col) -= c;
        }
    }
    Eigen::VectorXd b(n);
    const auto src = rhs.values();
    for (int k = 0; k < n; ++k) b(k) = src[k];

    Eigen::FullPivLU<Eigen::MatrixXd> lu(mat);
    if (!lu.isInvertible()) throw std::runtime_error("helmholtz_solve_dense: singular system");
    Eigen::VectorXd x = lu.solve(b);

    Field out(grid);
    auto dst = out.values();
    for (int k = 0; k < n; ++k) dst[k] = x(k);
    return out;
}

} // namespace sesav

#include "sesav/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sesav {

Grid::Grid(double length, int points) : length_(length), points_(points) {
    if (!(length > 0.0)) throw std::invalid_argument("Grid: length must be positive");
    if (points < 1) throw std::invalid_argument("Grid: points must be >= 1");
    spacing_ = length_ / points_;
}

double Field::wrapped(long i, long j) const {
    const long m = grid_.points();
    i %= m;
    if (i < 0) i += m;
    j %= m;
    if (j < 0) j += m;
    return (*this)(static_cast<int>(i), static_cast<int>(j));
}

void laplacian(const Field& v, Field& out) {
    const int m = v.points();
    if (!v.same_grid(out)) out = Field(v.grid());
    const double inv_h2 = 1.0 / (v.grid().spacing() * v.grid().spacing());
    const double* src = v.values().data();
    double* dst = out.values().data();
    for (int i = 0; i < m; ++i) {
        const int ip = (i + 1 == m) ? 0 : i + 1;
        const int im = (i == 0) ? m - 1 : i - 1;
        const double* row = src + static_cast<std::size_t>(i) * m;
        const double* row_p = src + static_cast<std::size_t>(ip) * m;
        const double* row_m = src + static_cast<std::size_t>(im) * m;
        double* drow = dst + static_cast<std::size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
            const int jp = (j + 1 == m) ? 0 : j + 1;
            const int jm = (j == 0) ? m - 1 : j - 1;
            drow[j] = (row_p[j] + row_m[j] + row[jp] + row[jm] - 4.0 * row[j]) * inv_h2;
        }
    }
}

Field laplacian(const Field& v) {
    Field out(v.grid());
    laplacian(v, out);
    return out;
}

VectorField gradient(const Field& v) {
    const int m = v.points();
    const double inv_h = 1.0 / v.grid().spacing();
    VectorField g{Field(v.grid()), Field(v.grid())};
    for (int i = 0; i < m; ++i) {
        const int ip = (i + 1 == m) ? 0 : i + 1;
        for (int j = 0; j < m; ++j) {
            const int jp = (j + 1 == m) ? 0 : j + 1;
            g.x(i, j) = (v(ip, j) - v(i, j)) * inv_h;
            g.y(i, j) = (v(i, jp) - v(i, j)) * inv_h;
        }
    }
    return g;
}

double inner(const Field& v, const Field& w) {
    if (!v.same_grid(w)) throw std::invalid_argument("inner: grid mismatch");
    const double h = v.grid().spacing();
    double sum = 0.0;
    const auto a = v.values();
    const auto b = w.values();
    for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
    return h * h * sum;
}

double norm2(const Field& v) { return std::sqrt(inner(v, v)); }

double norm_inf(const Field& v) {
    double m = 0.0;
    for (double x : v.values()) {
        if (std::isnan(x)) return x;  // propagate rather than silently drop
        m = std::max(m, std::abs(x));
    }
    return m;
}

double gradient_norm_sq(const Field& v) {
    // <grad v, grad v> = -<v, lap v> by summation by parts on the periodic mesh
    return -inner(v, laplacian(v));
}

bool all_finite(const Field& v) {
    for (double x : v.values())
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace sesav

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sesav {

/// Uniform periodic M x M mesh over the square (0,L)^2 with spacing h = L/M.
/// Mesh points are (x_i, y_j) = (i*h, j*h) for 0 <= i,j < M.
class Grid {
public:
    Grid(double length, int points);

    double length() const { return length_; }
    int points() const { return points_; }
    double spacing() const { return spacing_; }
    std::size_t cell_count() const { return static_cast<std::size_t>(points_) * points_; }

    double x(int i) const { return i * spacing_; }
    double y(int j) const { return j * spacing_; }

    bool operator==(const Grid&) const = default;

private:
    double length_;
    int points_;
    double spacing_;
};

/// Periodic grid function sampled at mesh points.
/// Storage is row-major: value(i, j) ~ u(x_i, y_j) lives at index i*M + j.
class Field {
public:
    Field() : grid_(1.0, 1) { data_.resize(1, 0.0); }
    explicit Field(const Grid& grid, double fill = 0.0)
        : grid_(grid), data_(grid.cell_count(), fill) {}

    const Grid& grid() const { return grid_; }
    int points() const { return grid_.points(); }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * grid_.points() + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * grid_.points() + j]; }

    /// Access with periodic wraparound (indices may be any integer).
    double wrapped(long i, long j) const;

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    bool same_grid(const Field& other) const { return grid_ == other.grid_; }

private:
    Grid grid_;
    std::vector<double> data_;
};

/// Forward-difference gradient: two components on the same mesh.
struct VectorField {
    Field x;
    Field y;
};

/// Five-point periodic Laplacian, (v[i+1,j]+v[i-1,j]+v[i,j+1]+v[i,j-1]-4v[i,j])/h^2.
Field laplacian(const Field& v);
void laplacian(const Field& v, Field& out);

/// Forward differences divided by h in each direction.
VectorField gradient(const Field& v);

/// Discrete L2 inner product h^2 * sum_ij v_ij w_ij. Throws on grid mismatch.
double inner(const Field& v, const Field& w);

/// sqrt(inner(v, v))
double norm2(const Field& v);

/// max_ij |v_ij|
double norm_inf(const Field& v);

/// ||grad_h v||^2 computed as -<v, laplacian(v)> (summation by parts).
double gradient_norm_sq(const Field& v);

bool all_finite(const Field& v);

} // namespace sesav

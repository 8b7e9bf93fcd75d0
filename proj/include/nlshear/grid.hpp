// grid.hpp
//
// Uniform periodic grid on the box [-lx/2, lx/2) x [-ly/2, ly/2).
// Samples are stored row-major: point (i, j) lives at i * ny + j, with i
// running along x and j along y.

#ifndef NLSHEAR_GRID_HPP
#define NLSHEAR_GRID_HPP

#include <cstddef>
#include <numbers>

namespace nlshear {

enum class Axis { x, y };

class Grid2D {
public:
    /// Throws std::invalid_argument unless nx, ny are even and >= 4 and
    /// lx, ly are positive and finite.
    Grid2D(int nx, int ny, double lx, double ly);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }

    std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(j);
    }

    double dx() const { return lx_ / nx_; }
    double dy() const { return ly_ / ny_; }
    double cell_area() const { return dx() * dy(); }
    double area() const { return lx_ * ly_; }

    double x(int i) const { return -0.5 * lx_ + i * dx(); }
    double y(int j) const { return -0.5 * ly_ + j * dy(); }

    // Signed mode number in [-n/2, n/2).
    static int wrap(int index, int n) { return index < n / 2 ? index : index - n; }
    int mode_x(int i) const { return wrap(i, nx_); }
    int mode_y(int j) const { return wrap(j, ny_); }

    double xi_x(int i) const { return 2.0 * std::numbers::pi * mode_x(i) / lx_; }
    double xi_y(int j) const { return 2.0 * std::numbers::pi * mode_y(j) / ly_; }
    double xi(Axis axis, int i, int j) const { return axis == Axis::x ? xi_x(i) : xi_y(j); }
    double xi_squared(int i, int j) const {
        const double a = xi_x(i), b = xi_y(j);
        return a * a + b * b;
    }

    // Unpaired modes: index n/2 along either axis.
    bool is_nyquist(Axis axis, int i, int j) const {
        return axis == Axis::x ? i == nx_ / 2 : j == ny_ / 2;
    }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    int nx_;
    int ny_;
    double lx_;
    double ly_;
};

} // namespace nlshear

#endif

#include "nlshear/spectral_ops.hpp"

#include "nlshear/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace nlshear {

SpectralField derivative(const SpectralField& f, Axis axis) {
    if (!f.all_finite())
        throw NumericalError(std::string("derivative: non-finite input along ") + (axis == Axis::x ? "x" : "y"));
    const Grid2D& g = f.grid();
    auto src = f.coefficients();
    std::vector<Complex> out(src.size());
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            const auto n = g.index(i, j);
            if (g.is_nyquist(axis, i, j)) {
                out[n] = 0.0;
                continue;
            }
            out[n] = Complex(0.0, g.xi(axis, i, j)) * src[n];
        }
    }
    return SpectralField::from_coefficients(g, std::move(out));
}

std::pair<SpectralField, SpectralField> gradient(const SpectralField& f) {
    return {derivative(f, Axis::x), derivative(f, Axis::y)};
}

bool in_dealias_band(const Grid2D& grid, int i, int j) {
    // |m| > n/3  <=>  3|m| > n
    return 3 * std::abs(grid.mode_x(i)) <= grid.nx() && 3 * std::abs(grid.mode_y(j)) <= grid.ny();
}

void dealias_in_place(SpectralField& f) {
    const Grid2D& g = f.grid();
    auto c = f.mutable_coefficients();
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j)
            if (!in_dealias_band(g, i, j)) c[g.index(i, j)] = 0.0;
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    dealias_in_place(out);
    return out;
}

double sobolev_norm(const SpectralField& f, double s) {
    const Grid2D& g = f.grid();
    auto c = f.coefficients();
    double sum = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            const double weight = s == 0.0 ? 1.0 : std::pow(1.0 + g.xi_squared(i, j), s);
            sum += weight * std::norm(c[g.index(i, j)]);
        }
    }
    const double n = static_cast<double>(g.size());
    return std::sqrt(sum * g.area() / (n * n));
}

double l2_norm(const SpectralField& f) { return std::sqrt(inner_product(f, f)); }

double inner_product(const SpectralField& f, const SpectralField& g) {
    auto a = f.values();
    auto b = g.values();
    double sum = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) sum += a[n] * b[n];
    return sum * f.grid().cell_area();
}

double sup_norm_gradient(const SpectralField& f) {
    const auto [fx, fy] = gradient(f);
    auto a = fx.values();
    auto b = fy.values();
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::hypot(a[n], b[n]));
    return m;
}

double boundary_ring_max(const SpectralField& f) {
    const Grid2D& g = f.grid();
    double m = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            if (i != 0 && j != 0 && i != g.nx() - 1 && j != g.ny() - 1) continue;
            m = std::max(m, std::abs(f(i, j)));
        }
    }
    return m;
}

} // namespace nlshear

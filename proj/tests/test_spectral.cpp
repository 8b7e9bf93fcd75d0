#include "doctest.h"

#include "support.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/spectral_ops.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace nlshear;
using testing::max_diff;

namespace {
const double pi = std::numbers::pi;
}

TEST_CASE("forward/inverse round trip and conjugate symmetry") {
    const Grid2D g(32, 16, 10.0, 6.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng);
    const SpectralField f = SpectralField::from_values(g, v);
    auto c = f.coefficients();
    double sym = 0.0, scale = 0.0;
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            const Complex a = c[g.index(i, j)];
            const Complex b = c[g.index((g.nx() - i) % g.nx(), (g.ny() - j) % g.ny())];
            sym = std::max(sym, std::abs(a - std::conj(b)));
            scale = std::max(scale, std::abs(a));
        }
    CHECK(sym <= 1e-12 * scale);

    const SpectralField back = SpectralField::from_coefficients(g, {c.begin(), c.end()});
    double err = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) err = std::max(err, std::abs(back.values()[n] - v[n]));
    CHECK(err <= 1e-12);
    CHECK(back.imaginary_residue() <= 1e-12);
}

TEST_CASE("derivative of a constant vanishes") {
    const Grid2D g(16, 16, 5.0, 5.0);
    const SpectralField f = SpectralField::from_function(g, [](double, double) { return 3.25; });
    CHECK(derivative(f, Axis::x).max_abs() <= 1e-14);
    CHECK(derivative(f, Axis::y).max_abs() <= 1e-14);
}

TEST_CASE("derivative of a resolved sine is exact") {
    const double lx = 7.0;
    const Grid2D g(32, 16, lx, 3.0);
    const SpectralField f = SpectralField::from_function(g, [&](double x, double) { return std::sin(2 * pi * x / lx); });
    const SpectralField expect =
        SpectralField::from_function(g, [&](double x, double) { return 2 * pi / lx * std::cos(2 * pi * x / lx); });
    CHECK(max_diff(derivative(f, Axis::x), expect) <= 1e-12);
    CHECK(derivative(f, Axis::y).max_abs() <= 1e-12);
}

TEST_CASE("derivative agrees with centered differences at second order") {
    // Smooth periodic field; the centered-difference error shrinks as h^2.
    const double L = 2 * pi;
    auto fn = [](double x, double y) { return std::exp(std::sin(x)) * std::cos(2 * y) + 0.3 * std::sin(x + y); };
    std::vector<double> errs;
    for (int n : {32, 64, 128}) {
        const Grid2D g(n, n, L, L);
        const SpectralField f = SpectralField::from_function(g, fn);
        const SpectralField d = derivative(f, Axis::x);
        double e = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double fd = (f((i + 1) % n, j) - f((i + n - 1) % n, j)) / (2 * g.dx());
                e = std::max(e, std::abs(fd - d(i, j)));
            }
        errs.push_back(e);
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 1.9);
    CHECK(std::log2(errs[1] / errs[2]) >= 1.9);
}

TEST_CASE("derivative zeroes the Nyquist mode and rejects non-finite input") {
    const Grid2D g(8, 8, 8.0, 8.0);
    // cos(pi x / dx) alternates sign: pure Nyquist along x.
    const SpectralField f = SpectralField::from_function(g, [&](double x, double) { return std::cos(pi * x / g.dx()); });
    CHECK(derivative(f, Axis::x).max_abs() <= 1e-14);

    std::vector<double> bad(g.size(), 0.0);
    bad[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(derivative(SpectralField::from_values(g, bad), Axis::y), NumericalError);
}

TEST_CASE("dealias keeps the retained band and drops Nyquist") {
    const Grid2D g(24, 24, 2 * pi, 2 * pi);
    const SpectralField inside =
        SpectralField::from_function(g, [](double x, double y) { return std::cos(8 * x) + std::sin(3 * x - 8 * y); });
    CHECK(max_diff(dealias(inside), inside) <= 1e-13);

    const SpectralField nyq = SpectralField::from_function(g, [&](double, double y) { return std::cos(12 * y); });
    CHECK(dealias(nyq).max_abs() <= 1e-13);

    const SpectralField outside = SpectralField::from_function(g, [](double x, double) { return std::cos(9 * x); });
    CHECK(dealias(outside).max_abs() <= 1e-13);
}

TEST_CASE("dealiased product of single modes is the sampled exact product") {
    const Grid2D g(24, 24, 2 * pi, 2 * pi);
    const SpectralField a = SpectralField::from_function(g, [](double x, double) { return std::sin(3 * x); });
    const SpectralField b = SpectralField::from_function(g, [](double x, double y) { return std::sin(4 * x + y); });
    std::vector<double> prod(g.size());
    for (std::size_t n = 0; n < prod.size(); ++n) prod[n] = a.values()[n] * b.values()[n];
    const SpectralField p = dealias(SpectralField::from_values(g, prod));
    // sin(3x) sin(4x + y) = (cos(x + y) - cos(7x + y)) / 2, both inside |m| <= 8.
    const SpectralField exact = SpectralField::from_function(
        g, [](double x, double y) { return 0.5 * (std::cos(x + y) - std::cos(7 * x + y)); });
    CHECK(max_diff(p, exact) <= 1e-13);
}

TEST_CASE("derivative and dealias are linear") {
    const Grid2D g(32, 32, 10.0, 10.0);
    const SpectralField a = testing::smooth_random(g, 1, 8);
    const SpectralField b = testing::smooth_random(g, 2, 12);
    const SpectralField combo = 2.5 * a + (-1.5) * b;
    for (Axis ax : {Axis::x, Axis::y})
        CHECK(max_diff(derivative(combo, ax), 2.5 * derivative(a, ax) + (-1.5) * derivative(b, ax)) <= 1e-12);
    CHECK(max_diff(dealias(combo), 2.5 * dealias(a) + (-1.5) * dealias(b)) <= 1e-12);
}

TEST_CASE("sobolev norm of constants, zero and a single mode") {
    const Grid2D g(16, 16, 6.0, 4.0);
    const SpectralField c = SpectralField::from_function(g, [](double, double) { return -2.0; });
    for (double s : {0.0, 1.0, 2.5, -1.0}) CHECK(sobolev_norm(c, s) == doctest::Approx(2.0 * std::sqrt(24.0)).epsilon(1e-13));
    CHECK(sobolev_norm(SpectralField(g), 1.0) == 0.0);

    const double k = 2 * pi / 6.0;
    const SpectralField m = SpectralField::from_function(g, [&](double x, double) { return 0.7 * std::cos(k * x); });
    // L2 of 0.7 cos over the box: 0.7 * sqrt(area / 2).
    const double l2 = 0.7 * std::sqrt(24.0 / 2.0);
    CHECK(l2_norm(m) == doctest::Approx(l2).epsilon(1e-12));
    CHECK(sobolev_norm(m, 1.0) == doctest::Approx(std::sqrt(1 + k * k) * l2).epsilon(1e-12));
}

TEST_CASE("Parseval: s = 0 matches the real-space quadrature") {
    const Grid2D g(32, 24, 9.0, 5.0);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> v(g.size());
        double direct = 0.0;
        for (auto& x : v) {
            x = u(rng);
            direct += x * x;
        }
        direct = std::sqrt(direct * g.cell_area());
        const SpectralField f = SpectralField::from_values(g, v);
        CHECK(sobolev_norm(f, 0.0) == doctest::Approx(direct).epsilon(1e-10));
        CHECK(l2_norm(f) == doctest::Approx(direct).epsilon(1e-10));
        CHECK(inner_product(f, f) == doctest::Approx(direct * direct).epsilon(1e-10));
    }
}

TEST_CASE("sobolev norm is non-decreasing in s") {
    const Grid2D g(32, 32, 10.0, 10.0);
    const SpectralField f = testing::smooth_random(g, 9, 10);
    double prev = 0.0;
    for (double s = -2.0; s <= 3.0; s += 0.5) {
        const double n = sobolev_norm(f, s);
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("sup norm of the gradient") {
    const double lx = 12.0;
    const Grid2D g(64, 32, lx, 8.0);
    CHECK(sup_norm_gradient(SpectralField::from_function(g, [](double, double) { return 4.0; })) <= 1e-13);
    const SpectralField s = SpectralField::from_function(g, [&](double x, double) { return std::sin(2 * pi * x / lx); });
    CHECK(sup_norm_gradient(s) == doctest::Approx(2 * pi / lx).epsilon(1e-6));
    const SpectralField f = testing::smooth_random(g, 4, 5);
    CHECK(sup_norm_gradient(-3.0 * f) == doctest::Approx(3.0 * sup_norm_gradient(f)).epsilon(1e-12));
}

TEST_CASE("boundary ring telemetry") {
    const Grid2D g(32, 32, 40.0, 40.0);
    const SpectralField bump =
        SpectralField::from_function(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 2.0); });
    CHECK(boundary_ring_max(bump) <= 1e-12);
    const SpectralField flat = SpectralField::from_function(g, [](double, double) { return 1.0; });
    CHECK(boundary_ring_max(flat) == doctest::Approx(1.0));
}

#include "doctest.h"

#include "support.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/nonlocal_operator.hpp"
#include "nlshear/oracle.hpp"
#include "nlshear/spectral_ops.hpp"

#include <cmath>
#include <numbers>

using namespace nlshear;
using testing::max_diff;
using testing::rel_diff;

namespace {

const double pi = std::numbers::pi;
const IsotropicEnergy linear = IsotropicEnergy::power_law(0.5, 1.0);
const IsotropicEnergy g1 = IsotropicEnergy::linear_plus(IsotropicEnergy::power_law(1.0, 2.0));

SpectralField mode(const Grid2D& g, int mx, int my, double A = 1.0) {
    return SpectralField::from_function(g, [=, &g](double x, double y) {
        return A * std::cos(2 * pi * (mx * x / g.lx() + my * y / g.ly()));
    });
}

} // namespace

TEST_CASE("K of zero is zero") {
    const Grid2D g(16, 16, 10.0, 10.0);
    for (const KernelSymbol& k : {bessel_k0(), gaussian(), dirac()}) {
        const OperatorContext ctx(g, k, g1);
        CHECK(apply_K(ctx, SpectralField(g)).max_abs() == 0.0);
    }
    const OperatorContext ctx(g, bessel_k0(), IsotropicEnergy::power_law(-1.0, 0.5));
    CHECK(apply_K(ctx, SpectralField(g)).max_abs() == 0.0);
}

TEST_CASE("dirac kernel with the linear energy is the Laplacian") {
    const double lx = 9.0;
    const Grid2D g(32, 32, lx, 6.0);
    const OperatorContext ctx(g, dirac(), linear);
    const SpectralField w = SpectralField::from_function(g, [&](double x, double) { return std::sin(2 * pi * x / lx); });
    const double k = 2 * pi / lx;
    CHECK(max_diff(apply_K(ctx, w), (-k * k) * w) <= 1e-12);
    CHECK(max_diff(apply_K(ctx, w), local_divergence(ctx, w)) <= 1e-14);
}

TEST_CASE("bessel kernel with the linear energy on one mode") {
    const Grid2D g(32, 32, 12.0, 12.0);
    const OperatorContext ctx(g, bessel_k0(), linear);
    const SpectralField w = mode(g, 3, -2, 0.8);
    const double xi2 = std::pow(2 * pi * 3 / 12.0, 2) + std::pow(2 * pi * 2 / 12.0, 2);
    const SpectralField expect = (-xi2 / (1 + xi2)) * w;
    CHECK(max_diff(apply_K(ctx, w), expect) <= 1e-13);
    CHECK(max_diff(apply_local_equivalent(ctx, w), expect) <= 1e-13);
}

TEST_CASE("apply_K matches the direct-space convolution oracle on 16x16") {
    const Grid2D g(16, 16, 8.0, 8.0);
    for (unsigned seed : {1u, 2u, 3u}) {
        const OperatorContext ctx(g, bessel_k0(), g1);
        const SpectralField w = testing::smooth_random(g, seed, 3, 0.3);
        const SpectralField Kw = apply_K(ctx, w);
        CHECK(oracle::max_abs_difference(Kw, oracle::direct_space_K(ctx, w)) <= 1e-10 * Kw.max_abs());
    }
}

TEST_CASE("R powers") {
    const Grid2D g(32, 32, 10.0, 10.0);
    const SpectralField f = testing::smooth_random(g, 21, 6);

    const OperatorContext d(g, dirac(), linear);
    CHECK(max_diff(apply_R_power(d, f, -2.0), f) <= 1e-14);

    const OperatorContext b(g, bessel_k0(), linear);
    // R^{-2} is convolution with beta: multiply each coefficient by the symbol.
    std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) c[g.index(i, j)] /= 1.0 + g.xi_squared(i, j);
    CHECK(max_diff(apply_R_power(b, f, -2.0), SpectralField::from_coefficients(g, c)) <= 1e-13);

    const SpectralField m = mode(g, 2, 1);
    const double xi2 = std::pow(2 * pi * 2 / 10.0, 2) + std::pow(2 * pi / 10.0, 2);
    CHECK(max_diff(apply_R_power(b, m, 2.0), (1 + xi2) * m) <= 1e-12);

    for (const KernelSymbol& k : {bessel_k0(), bi_helmholtz(2.0, 1.0), gaussian()}) {
        const OperatorContext ctx(g, k, linear);
        CHECK(max_diff(apply_R_power(ctx, apply_R_power(ctx, f, 1.0), -1.0), f) <= 1e-10);
    }
}

TEST_CASE("R norm is the weighted Parseval sum") {
    const Grid2D g(16, 16, 6.0, 6.0);
    const OperatorContext b(g, bessel_k0(), linear);
    const SpectralField m = mode(g, 1, 0, 0.5);
    const double xi2 = std::pow(2 * pi / 6.0, 2);
    // ||R m||^2 = (1 + |xi|^2) ||m||^2 for a single mode.
    CHECK(R_norm_squared(b, m) == doctest::Approx((1 + xi2) * std::pow(l2_norm(m), 2)).epsilon(1e-12));
    const SpectralField f = testing::smooth_random(g, 3, 3);
    const SpectralField h = testing::smooth_random(g, 4, 3);
    CHECK(R_inner_product(b, f, h) == doctest::Approx(inner_product(apply_R_power(b, f, 1.0), apply_R_power(b, h, 1.0))).epsilon(1e-10));
}

TEST_CASE("local equivalent forms") {
    const Grid2D g(64, 64, 40.0, 40.0);
    for (const KernelSymbol& k : {bessel_k0(), bi_helmholtz(2.0, 1.0)}) {
        const OperatorContext ctx(g, k, g1);
        const SpectralField w = testing::smooth_random(g, 31, 12, 0.5);
        CHECK(rel_diff(apply_local_equivalent(ctx, w), apply_K(ctx, w)) <= 1e-12);
        CHECK(apply_local_equivalent(ctx, SpectralField(g)).max_abs() == 0.0);
    }
    CHECK_THROWS_AS(apply_local_equivalent(OperatorContext(g, gaussian(), g1), SpectralField(g)), std::invalid_argument);
    CHECK_THROWS_AS(apply_local_equivalent(OperatorContext(g, dirac(), g1), SpectralField(g)), std::invalid_argument);
}

TEST_CASE("local divergence and multiplier factorization") {
    const Grid2D g(32, 32, 10.0, 10.0);
    const SpectralField w = testing::smooth_random(g, 41, 5, 0.4);
    // Linear energy: div grad w.
    const OperatorContext lin(g, gaussian(), linear);
    const auto [wx, wy] = gradient(w);
    const SpectralField lap = derivative(wx, Axis::x) + derivative(wy, Axis::y);
    CHECK(max_diff(local_divergence(lin, dealias(w)), dealias(lap)) <= 1e-12);

    for (const KernelSymbol& k : {bessel_k0(), gaussian(), bi_helmholtz(3.0, 1.0)}) {
        const OperatorContext ctx(g, k, g1);
        CHECK(rel_diff(apply_K(ctx, w), apply_R_power(ctx, local_divergence(ctx, w), -2.0)) <= 1e-10);
    }
}

TEST_CASE("smoothing: Kw is controlled by w in the shifted norm") {
    const Grid2D g(64, 64, 40.0, 40.0);
    const OperatorContext ctx(g, bessel_k0(), linear);
    for (unsigned seed : {5u, 6u, 7u}) {
        const SpectralField w = testing::smooth_random(g, seed, 16);
        // For the linear energy |Kw^| = |xi|^2/(1+|xi|^2) |w^| <= |w^|.
        for (double s : {0.0, 1.0, 2.0}) {
            const double ratio = sobolev_norm(apply_K(ctx, w), s) / sobolev_norm(w, s);
            CHECK(std::isfinite(ratio));
            CHECK(ratio <= 1.0);
        }
    }
    const OperatorContext nl(g, bessel_k0(), g1);
    const SpectralField w = testing::smooth_random(g, 8, 10, 0.3);
    const double ratio = sobolev_norm(apply_K(nl, w), 1.0) / sobolev_norm(w, 1.0);
    CHECK(std::isfinite(ratio));
    CHECK(ratio > 0.0);
}

TEST_CASE("floor policy for underflowing gaussian symbols") {
    // |xi| reaches ~40 here, where exp(-|xi|^2/2) underflows to 0.
    const Grid2D g(128, 128, 10.0, 10.0);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng);
    const SpectralField rough = SpectralField::from_values(g, v);

    const OperatorContext skip(g, gaussian(), linear);
    FloorTelemetry tel;
    const double n2 = R_norm_squared(skip, rough, &tel);
    CHECK(std::isfinite(n2));
    CHECK(tel.skipped_modes > 0);
    CHECK(tel.skipped_energy_fraction > 1e-8);
    CHECK(tel.warning);

    OperatorOptions capped;
    capped.floor.mode = FloorMode::cap;
    capped.floor.epsilon_floor = 1e-200;
    const OperatorContext cap(g, gaussian(), linear, capped);
    FloorTelemetry ct;
    (void)apply_R_power(cap, rough, 1.0, &ct);
    CHECK(ct.capped_modes > 0);
    CHECK(ct.skipped_modes == 0);

    OperatorOptions strict;
    strict.strict = true;
    const OperatorContext st(g, gaussian(), linear, strict);
    CHECK_THROWS_AS(R_norm_squared(st, rough), NumericalError);

    // Smooth data leaves the floored modes empty: no warning even in strict mode.
    const SpectralField smooth = mode(g, 1, 1);
    FloorTelemetry quiet;
    CHECK_NOTHROW(R_norm_squared(st, smooth, &quiet));
    CHECK_FALSE(quiet.warning);

    CHECK_THROWS_AS(OperatorContext(g, gaussian(), linear, OperatorOptions{{2.0, FloorMode::skip}}), std::invalid_argument);
}

TEST_CASE("polynomial symbols never hit the floor") {
    const Grid2D g(256, 256, 10.0, 10.0);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng);
    const SpectralField f = SpectralField::from_values(g, v);
    for (const KernelSymbol& k : {bessel_k0(), bi_helmholtz(2.0, 1.0)}) {
        const OperatorContext ctx(g, k, linear);
        FloorTelemetry tel;
        (void)R_norm_squared(ctx, f, &tel);
        CHECK(tel.skipped_modes == 0);
        CHECK(tel.skipped_energy_fraction == 0.0);
    }
}

TEST_CASE("fields on a foreign grid are rejected") {
    const OperatorContext ctx(Grid2D(16, 16, 5.0, 5.0), bessel_k0(), linear);
    CHECK_THROWS_AS(apply_K(ctx, SpectralField(Grid2D(8, 8, 5.0, 5.0))), std::invalid_argument);
}

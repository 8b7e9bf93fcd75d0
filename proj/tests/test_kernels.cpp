#include "doctest.h"

#include "support.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace nlshear;

TEST_CASE("gaussian symbol") {
    const KernelSymbol k = gaussian();
    CHECK(std::abs(k(0, 0) - 1.0) <= 1e-14);
    CHECK(k(1, 1) == doctest::Approx(0.3678794412).epsilon(1e-10));
    CHECK(k.has_infinite_rate());
    CHECK(k.effective_r() == 10.0);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int n = 0; n < 50; ++n) {
        const double a = u(rng), b = u(rng);
        CHECK(k(a, b) == k(-a, -b));
    }
}

TEST_CASE("bessel symbol") {
    const KernelSymbol k = bessel_k0();
    CHECK(k(0, 0) == 1.0);
    CHECK(std::abs(k(1, 1) - 1.0 / 3.0) <= 1e-14);
    CHECK(k.r() == 2.0);
    CHECK(k.C() == 1.0);
}

TEST_CASE("bi-Helmholtz symbol and parameters") {
    const KernelSymbol k = bi_helmholtz(2.0, 1.0);
    CHECK(k.param("gamma1") == 5.0);
    CHECK(k.param("gamma2") == 4.0);
    CHECK(std::abs(k(1, 0) - 0.1) <= 1e-14);
    CHECK(k(0, 0) == 1.0);
    CHECK(k.r() == 4.0);
    CHECK_THROWS_AS(bi_helmholtz(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bi_helmholtz(-1.0, 2.0), std::invalid_argument);

    const KernelSymbol swapped = bi_helmholtz(1.0, 2.0);
    for (double a : {0.0, 0.3, 1.7, 4.0})
        for (double b : {-2.0, 0.5})
            CHECK(k(a, b) == swapped(a, b));
}

TEST_CASE("dirac symbol is identically one and outside the decay class") {
    const KernelSymbol k = dirac();
    CHECK(k(7.3, -2.1) == 1.0);
    const Grid2D g(32, 32, 40.0, 40.0);
    const DecayReport rep = validate_decay(k, g, 2.0, 1.0);
    CHECK_FALSE(rep.bounded);
    CHECK_FALSE(rep.pass());
    CHECK_FALSE(validate_decay(k, g).pass());
}

TEST_CASE("validate_decay: bessel is the equality case C = 1, r = 2") {
    for (int n : {16, 64, 128}) {
        const Grid2D g(n, n, 40.0, 40.0);
        const DecayReport rep = validate_decay(bessel_k0(), g, 2.0, 1.0);
        CHECK(rep.pass());
        CHECK(rep.empirical_C == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(rep.min_symbol > 0.0);
    }
}

TEST_CASE("validate_decay: gaussian against r = 10") {
    const Grid2D g(64, 64, 40.0, 40.0);
    // Independent maximization of e^{-t/2} (1+t)^5 over the grid frequencies.
    double emp = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const double t = g.xi_squared(i, j);
            emp = std::max(emp, std::exp(-t / 2) * std::pow(1 + t, 5));
        }
    CHECK(emp > 1000.0);

    const DecayReport claimed_one = validate_decay(gaussian(), g, 10.0, 1.0);
    CHECK(claimed_one.empirical_C == doctest::Approx(emp).epsilon(1e-12));
    CHECK_FALSE(claimed_one.pass());

    // The stored constant is the continuum supremum, attained at |xi|^2 = 9.
    const DecayReport builtin = validate_decay(gaussian(), g);
    CHECK(builtin.C == doctest::Approx(std::exp(-4.5) * 1e5).epsilon(1e-12));
    CHECK(builtin.pass());
}

TEST_CASE("built-in symbols lie in [0, 1] and are radially non-increasing") {
    const Grid2D g(64, 64, 40.0, 40.0);
    for (const KernelSymbol& k : {gaussian(), bessel_k0(), bi_helmholtz(2.0, 1.0), bi_helmholtz(0.5, 3.0)}) {
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                const double s = k(g.xi_x(i), g.xi_y(j));
                CHECK(s >= 0.0);
                CHECK(s <= 1.0);
            }
        for (double angle : {0.0, 0.4, 1.1, 2.5}) {
            double prev = k(0, 0);
            for (double r = 0.1; r < 20.0; r += 0.1) {
                const double s = k(r * std::cos(angle), r * std::sin(angle));
                CHECK(s <= prev);
                prev = s;
            }
        }
    }
}

TEST_CASE("built-in kernels pass their own decay check at several resolutions") {
    for (int n : {16, 64, 128})
        for (double L : {10.0, 40.0}) {
            const Grid2D g(n, n, L, L);
            CHECK(validate_decay(gaussian(), g).pass());
            CHECK(validate_decay(bessel_k0(), g).pass());
            CHECK(validate_decay(bi_helmholtz(2.0, 1.0), g).pass());
        }
}

TEST_CASE("tabulated kernel reads grid frequencies from CSV") {
    const Grid2D g(8, 8, 6.0, 6.0);
    const auto dir = testing::temp_dir("kernels");
    const auto path = (dir / "bessel.csv").string();
    {
        std::ofstream out(path);
        out << "xi1,xi2,value\n";
        char buf[128];
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                const double a = g.xi_x(i), b = g.xi_y(j);
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", a, b, 1.0 / (1.0 + a * a + b * b));
                out << buf;
            }
    }
    const KernelSymbol t = tabulated(path, g, 2.0, 1.0);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) CHECK(t(g.xi_x(i), g.xi_y(j)) == bessel_k0()(g.xi_x(i), g.xi_y(j)));
    CHECK(validate_decay(t, g).pass());

    {
        std::ofstream out(dir / "partial.csv");
        out << "0,0,1\n";
    }
    CHECK_THROWS_AS(tabulated((dir / "partial.csv").string(), g, 2.0, 1.0), ConfigError);
    {
        std::ofstream out(dir / "offgrid.csv");
        out << "0.1234,0,1\n";
    }
    CHECK_THROWS_AS(tabulated((dir / "offgrid.csv").string(), g, 2.0, 1.0), ConfigError);
    CHECK_THROWS_AS(tabulated((dir / "missing.csv").string(), g, 2.0, 1.0), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("maximal linear frequency") {
    const Grid2D g(16, 16, 2 * std::numbers::pi, 2 * std::numbers::pi);
    // dirac: max |xi| over the grid is at the corner (-8, -8).
    CHECK(max_linear_frequency(dirac(), g) == doctest::Approx(std::sqrt(128.0)));
    // bessel: |xi| / sqrt(1 + |xi|^2), increasing in |xi|.
    CHECK(max_linear_frequency(bessel_k0(), g) == doctest::Approx(std::sqrt(128.0 / 129.0)));
}

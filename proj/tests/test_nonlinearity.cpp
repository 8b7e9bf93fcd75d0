#include "doctest.h"

#include "support.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/nonlinearity.hpp"
#include "nlshear/spectral_ops.hpp"

#include <cmath>
#include <limits>

using namespace nlshear;
using testing::max_diff;

namespace {

std::pair<SpectralField, SpectralField> grad_fields(const Grid2D& g, unsigned seed) {
    return gradient(testing::smooth_random(g, seed, 4, 0.5));
}

} // namespace

TEST_CASE("power law values and exact derivative") {
    const IsotropicEnergy F = IsotropicEnergy::power_law(-1.5, 2.5);
    CHECK(F.F(0.0) == 0.0);
    CHECK(F.F(4.0) == doctest::Approx(-1.5 * 32.0));
    CHECK(F.Fprime(4.0) == doctest::Approx(-1.5 * 2.5 * 8.0));
    CHECK(F.power_law_params()->q == 2.5);
    CHECK_THROWS_AS(IsotropicEnergy::power_law(1.0, 0.0), std::invalid_argument);

    const IsotropicEnergy G = IsotropicEnergy::linear_plus(IsotropicEnergy::power_law(1.0, 2.0));
    CHECK(G.F(3.0) == doctest::Approx(1.5 + 9.0));
    CHECK(G.Fprime(3.0) == doctest::Approx(0.5 + 6.0));

    // q < 1: F' is unbounded at 0, u F' is not.
    const IsotropicEnergy H = IsotropicEnergy::power_law(-1.0, 0.5);
    CHECK(H.u_Fprime(0.0) == 0.0);
    CHECK(H.u_Fprime(0.25) == doctest::Approx(-0.25));
}

TEST_CASE("custom energies are checked at construction") {
    auto F = [](double u) { return u * u; };
    CHECK_NOTHROW(IsotropicEnergy::custom("sq", F, [](double u) { return 2 * u; }));
    CHECK_THROWS_AS(IsotropicEnergy::custom("bad", F, [](double u) { return 2.1 * u; }), std::invalid_argument);
    CHECK_THROWS_AS(IsotropicEnergy::custom("shift", [](double u) { return u + 1; }, [](double) { return 1.0; }),
                    std::invalid_argument);

    auto Ft = [](double p, double q) { return p * p * q; };
    CHECK_NOTHROW(AnisotropicEnergy::custom("p2q", Ft, [](double p, double q) { return std::make_pair(2 * p * q, p * p); }));
    CHECK_THROWS_AS(
        AnisotropicEnergy::custom("p2q", Ft, [](double p, double q) { return std::make_pair(2 * p * q, q * q); }),
        std::invalid_argument);
}

TEST_CASE("stress of the linear energy is the gradient itself") {
    const Grid2D g(32, 32, 20.0, 20.0);
    const auto [wx, wy] = grad_fields(g, 5);
    const auto [sx, sy] = stress_isotropic(IsotropicEnergy::power_law(0.5, 1.0), wx, wy, false);
    CHECK(max_diff(sx, wx) <= 1e-15);
    CHECK(max_diff(sy, wy) <= 1e-15);
    const auto [dx, dy] = stress_isotropic(IsotropicEnergy::power_law(0.5, 1.0), wx, wy, true);
    CHECK(max_diff(dx, wx) <= 1e-13); // low modes survive the 2/3 filter
    CHECK(max_diff(dy, wy) <= 1e-13);
}

TEST_CASE("zero gradients give zero stress for every energy") {
    const Grid2D g(16, 16, 10.0, 10.0);
    const SpectralField z(g);
    for (const Energy& e : {Energy(IsotropicEnergy::power_law(-1.0, 0.5)), Energy(IsotropicEnergy::power_law(2.0, 3.0)),
                            Energy(quartic_anisotropic(-1.0)), Energy(p2q_anisotropic())}) {
        const auto [sx, sy] = stress(e, z, z);
        CHECK(sx.max_abs() == 0.0);
        CHECK(sy.max_abs() == 0.0);
    }
}

TEST_CASE("pointwise stresses by hand") {
    // F = u^2 at (1, 2): u = 5, F' = 10, stress = (2*1*10, 2*2*10).
    const auto s = stress_at(Energy(IsotropicEnergy::power_law(1.0, 2.0)), 1.0, 2.0);
    CHECK(s.first == doctest::Approx(20.0));
    CHECK(s.second == doctest::Approx(40.0));
    const auto t = stress_at(Energy(p2q_anisotropic()), 1.0, 2.0);
    CHECK(t.first == doctest::Approx(4.0));
    CHECK(t.second == doctest::Approx(1.0));
    // Quartic: grad (|U|^2)^2 = 4 |U|^2 U.
    const auto q = stress_at(Energy(quartic_anisotropic(1.0)), 1.0, 2.0);
    CHECK(q.first == doctest::Approx(20.0));
    CHECK(q.second == doctest::Approx(40.0));
    CHECK(gradient_dot_stress(Energy(IsotropicEnergy::power_law(1.0, 2.0)), 1.0, 2.0) == doctest::Approx(100.0));
    CHECK(energy_density(Energy(IsotropicEnergy::power_law(1.0, 2.0)), 1.0, 2.0) == doctest::Approx(25.0));
}

TEST_CASE("anisotropic form of an isotropic energy reproduces its stresses") {
    const Grid2D g(32, 32, 20.0, 20.0);
    const auto [wx, wy] = grad_fields(g, 8);
    const IsotropicEnergy half = IsotropicEnergy::power_law(0.5, 1.0);
    const AnisotropicEnergy quad = AnisotropicEnergy::custom(
        "half_square", [](double p, double q) { return 0.5 * (p * p + q * q); },
        [](double p, double q) { return std::make_pair(p, q); });
    const auto [ix, iy] = stress_isotropic(half, wx, wy);
    const auto [ax, ay] = stress_anisotropic(quad, wx, wy);
    CHECK(max_diff(ix, ax) == 0.0);
    CHECK(max_diff(iy, ay) == 0.0);

    const IsotropicEnergy cubic = IsotropicEnergy::power_law(-1.0, 2.0);
    const auto [jx, jy] = stress_isotropic(cubic, wx, wy);
    const auto [bx, by] = stress_anisotropic(AnisotropicEnergy::from_isotropic(cubic), wx, wy);
    CHECK(max_diff(jx, bx) == 0.0);
    CHECK(max_diff(jy, by) == 0.0);
}

TEST_CASE("non-finite stress reports the grid point") {
    const Grid2D g(8, 8, 8.0, 8.0);
    const IsotropicEnergy nasty = IsotropicEnergy::custom(
        "nasty", [](double u) { return u; },
        [](double u) { return u > 1.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }, 0.5);
    std::vector<double> v(g.size(), 0.0);
    v[g.index(3, 4)] = 2.0;
    const SpectralField wx = SpectralField::from_values(g, v);
    const SpectralField wy(g);
    try {
        (void)stress_isotropic(nasty, wx, wy);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("(3, 4)") != std::string::npos);
    }
}

TEST_CASE("global condition examples") {
    CHECK(check_global_condition(IsotropicEnergy::power_law(2.0, 3.0), 0.1, 100.0, 1000).pass);
    for (double k : {0.5, 1.0, 4.0}) {
        const ConditionReport r = check_global_condition(IsotropicEnergy::power_law(-1.0, 2.0), k, 10 * k, 1000);
        CHECK_FALSE(r.pass);
        CHECK(r.extreme < 0.0);
        CHECK(r.sample_max == doctest::Approx(10 * k));
    }
    const ConditionReport eq = check_global_condition(IsotropicEnergy::power_law(-1.0, 1.0), 1.0, 100.0, 1000);
    CHECK(eq.pass);
    CHECK(std::abs(eq.extreme) <= 1e-12);
}

TEST_CASE("global condition truth table for power laws") {
    for (double a : {-1.0, 1.0})
        for (double q : {0.5, 1.0, 2.0, 3.0}) {
            bool some_k = false;
            for (double k : {0.25, 1.0, 2.0, 8.0}) {
                const IsotropicEnergy F = IsotropicEnergy::power_law(a, q);
                const ConditionReport r = check_global_condition(F, k, 100.0, 1000);
                // a > 0: F >= 0. a < 0: -u^q + k u >= 0 on (0, 100] needs q = 1 and k >= 1.
                const bool hand = a > 0 || (q == 1.0 && k >= 1.0);
                CHECK(r.pass == hand);
                REQUIRE(r.closed_form.has_value());
                CHECK(*r.closed_form == hand);
                some_k = some_k || r.pass;
            }
            CHECK(some_k == (a > 0 || q == 1.0));
        }
}

TEST_CASE("blow-up condition examples") {
    const ConditionReport eq = check_blowup_condition(IsotropicEnergy::power_law(-1.0, 2.0), 0.5, 100.0, 1000);
    CHECK(eq.pass);
    CHECK(std::abs(eq.extreme) <= eq.tolerance);
    for (double nu : {0.01, 0.1, 0.5, 1.0, 3.0})
        CHECK_FALSE(check_blowup_condition(IsotropicEnergy::power_law(-1.0, 1.0), nu, 100.0, 1000).pass);
}

TEST_CASE("blow-up condition for the linear energy u/2") {
    // u F' - (1 + 2 nu) F = u/2 - (1 + 2 nu) u/2 = -nu u <= 0 for every nu > 0.
    const IsotropicEnergy F = IsotropicEnergy::power_law(0.5, 1.0);
    for (double nu : {0.01, 0.5, 2.0}) {
        const ConditionReport r = check_blowup_condition(F, nu, 100.0, 1000);
        CHECK(r.pass);
        CHECK(r.extreme <= 0.0);
        CHECK(r.extreme == doctest::Approx(-nu * r.sample_min).epsilon(1e-9));
    }
}

TEST_CASE("blow-up condition truth table for negative power laws") {
    const std::vector<double> nus{0.01, 0.1, 0.25, 0.5, 1.0};
    for (double q : {0.5, 1.0, 2.0, 3.0}) {
        const IsotropicEnergy F = IsotropicEnergy::power_law(-1.0, q);
        bool some = false;
        for (double nu : nus) {
            const ConditionReport r = check_blowup_condition(F, nu, 100.0, 1000);
            const bool hand = q >= 1.0 + 2.0 * nu; // (1 + 2 nu - q) u^q <= 0
            CHECK(r.pass == hand);
            CHECK(r.closed_form == std::optional<bool>(hand));
            some = some || r.pass;
        }
        CHECK(some == (q > 1.0));
        if (q > 1.0) CHECK(check_blowup_condition(F, (q - 1.0) / 2.0, 100.0, 1000).pass);
    }
}

TEST_CASE("anisotropic checkers") {
    CHECK(check_global_condition(quartic_anisotropic(1.0), 0.3, 5.0, 1000).pass);
    const ConditionReport b = check_blowup_condition(quartic_anisotropic(-1.0), 0.5, 5.0, 1000);
    CHECK(b.pass);
    CHECK(std::abs(b.extreme) <= b.tolerance);
    CHECK_FALSE(check_blowup_condition(quartic_anisotropic(-1.0), 0.6, 5.0, 1000).pass);
}

TEST_CASE("anisotropic verdicts match isotropic verdicts under reduction") {
    const double u_max = 25.0;
    for (double a : {-1.0, 1.0})
        for (double q : {0.5, 1.0, 2.0, 3.0}) {
            const IsotropicEnergy F = IsotropicEnergy::power_law(a, q);
            const AnisotropicEnergy Ft = AnisotropicEnergy::from_isotropic(F);
            for (double k : {0.5, 1.0, 3.0})
                CHECK(check_global_condition(F, k, u_max, 500).pass ==
                      check_global_condition(Ft, k, std::sqrt(u_max), 500).pass);
            for (double nu : {0.1, 0.5, 1.0})
                CHECK(check_blowup_condition(F, nu, u_max, 500).pass ==
                      check_blowup_condition(Ft, nu, std::sqrt(u_max), 500).pass);
        }
}

TEST_CASE("checker preconditions") {
    const IsotropicEnergy F = IsotropicEnergy::power_law(1.0, 2.0);
    CHECK_THROWS_AS(check_global_condition(F, 1.0, 10.0, 50), std::invalid_argument);
    CHECK_THROWS_AS(check_blowup_condition(F, 0.0, 10.0, 500), std::invalid_argument);
    CHECK_THROWS_AS(check_global_condition(F, 1.0, -1.0, 500), std::invalid_argument);
}

// Shared helpers for the test binaries.
#ifndef NLSHEAR_TEST_SUPPORT_HPP
#define NLSHEAR_TEST_SUPPORT_HPP

#include "nlshear/spectral_field.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>
#include <unistd.h>

namespace testing {

inline double max_diff(const nlshear::SpectralField& a, const nlshear::SpectralField& b) {
    auto x = a.values(), y = b.values();
    double d = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) d = std::max(d, std::abs(x[n] - y[n]));
    return d;
}

inline double rel_diff(const nlshear::SpectralField& a, const nlshear::SpectralField& b) {
    const double m = std::max(a.max_abs(), b.max_abs());
    return m > 0.0 ? max_diff(a, b) / m : 0.0;
}

// Sum of a few random low modes, sampled directly in real space.
inline nlshear::SpectralField smooth_random(const nlshear::Grid2D& g, unsigned seed, int modes = 4,
                                            double amplitude = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::array<double, 4>> t;
    for (int k = 0; k < 6; ++k)
        t.push_back({std::floor((u(rng) + 1.0) * 0.5 * (modes + 1)), std::floor(u(rng) * modes), u(rng),
                     u(rng) * 3.0});
    const double two_pi = 2.0 * std::numbers::pi;
    return nlshear::SpectralField::from_function(g, [&](double x, double y) {
        double s = 0.0;
        for (const auto& c : t) s += amplitude * c[2] * std::cos(two_pi * (c[0] * x / g.lx() + c[1] * y / g.ly()) + c[3]);
        return s;
    });
}

inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto p = std::filesystem::temp_directory_path() /
             ("nlshear_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline std::filesystem::path source_dir() { return NLSHEAR_SOURCE_DIR; }

} // namespace testing

#endif

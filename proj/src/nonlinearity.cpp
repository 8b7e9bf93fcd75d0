#include "nlshear/nonlinearity.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nlshear {

namespace {

constexpr double kDerivativeTolerance = 1e-6;
constexpr double kConditionTolerance = 1e-12;

bool derivative_matches(double analytic, double numeric) {
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-300});
    return std::abs(analytic - numeric) <= kDerivativeTolerance * std::max(scale, 1e-8);
}

// Log-uniform samples covering [hi * 10^-decades, hi].
std::vector<double> log_samples(double hi, double decades, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double e = n == 1 ? 0.0 : -decades + decades * k / (n - 1);
        out[static_cast<std::size_t>(k)] = hi * std::pow(10.0, e);
    }
    out.back() = hi;
    return out;
}

} // namespace

IsotropicEnergy::IsotropicEnergy(std::string name, Fn F, Fn Fprime)
    : name_(std::move(name)), F_(std::move(F)), Fprime_(std::move(Fprime)) {}

IsotropicEnergy IsotropicEnergy::power_law(double a, double q) {
    if (!(q > 0.0) || !std::isfinite(q) || !std::isfinite(a))
        throw std::invalid_argument("power_law: need finite a and q > 0");
    IsotropicEnergy e(
        "powerlaw", [a, q](double u) { return a == 0.0 ? 0.0 : a * std::pow(u, q); },
        [a, q](double u) { return a == 0.0 ? 0.0 : a * q * std::pow(u, q - 1.0); });
    e.power_ = PowerLaw{a, q};
    return e;
}

IsotropicEnergy IsotropicEnergy::linear_plus(const IsotropicEnergy& G) {
    auto inner = std::make_shared<const IsotropicEnergy>(G);
    IsotropicEnergy e(
        "linear_plus", [inner](double u) { return 0.5 * u + inner->F(u); },
        [inner](double u) { return 0.5 + inner->Fprime(u); });
    e.inner_ = inner;
    return e;
}

IsotropicEnergy IsotropicEnergy::custom(std::string name, Fn F, Fn Fprime, double u_max) {
    if (F(0.0) != 0.0) throw std::invalid_argument("energy " + name + ": F(0) must be 0");
    for (double u : log_samples(u_max, 6.0, 64)) {
        const double h = 1e-5 * u;
        const double numeric = (F(u + h) - F(u - h)) / (2.0 * h);
        if (!derivative_matches(Fprime(u), numeric)) {
            std::ostringstream msg;
            msg << "energy " << name << ": F' disagrees with finite differences at u=" << u << " (" << Fprime(u)
                << " vs " << numeric << ")";
            throw std::invalid_argument(msg.str());
        }
    }
    return IsotropicEnergy(std::move(name), std::move(F), std::move(Fprime));
}

std::optional<bool> IsotropicEnergy::exact_global_condition(double k) const {
    if (!power_) return std::nullopt;
    const auto [a, q] = *power_;
    if (a >= 0.0) return true;
    if (q == 1.0) return k >= -a;
    return false;
}

std::optional<bool> IsotropicEnergy::exact_blowup_condition(double nu) const {
    if (!power_) return std::nullopt;
    // a q u^q <= (1 + 2 nu) a u^q for all u >= 0
    const auto [a, q] = *power_;
    if (a == 0.0) return true;
    return a > 0.0 ? q <= 1.0 + 2.0 * nu : q >= 1.0 + 2.0 * nu;
}

AnisotropicEnergy::AnisotropicEnergy(std::string name, Fn F, GradFn grad)
    : name_(std::move(name)), F_(std::move(F)), grad_(std::move(grad)) {}

AnisotropicEnergy AnisotropicEnergy::from_isotropic(const IsotropicEnergy& F) {
    auto src = std::make_shared<const IsotropicEnergy>(F);
    AnisotropicEnergy e(
        "isotropic_reduction", [src](double p, double q) { return src->F(p * p + q * q); },
        [src](double p, double q) -> std::pair<double, double> {
            const double u = p * p + q * q;
            if (u == 0.0) return {0.0, 0.0};
            const double f = src->Fprime(u);
            return {2.0 * p * f, 2.0 * q * f};
        });
    e.source_ = src;
    return e;
}

AnisotropicEnergy AnisotropicEnergy::custom(std::string name, Fn Ft, GradFn grad, double radius) {
    if (Ft(0.0, 0.0) != 0.0) throw std::invalid_argument("energy " + name + ": Ft(0,0) must be 0");
    for (double r : log_samples(radius, 3.0, 16)) {
        for (int k = 0; k < 12; ++k) {
            const double th = 2.0 * std::numbers::pi * (k + 0.5) / 12.0;
            const double p = r * std::cos(th), q = r * std::sin(th);
            const double h = 1e-5 * r;
            const double dp = (Ft(p + h, q) - Ft(p - h, q)) / (2.0 * h);
            const double dq = (Ft(p, q + h) - Ft(p, q - h)) / (2.0 * h);
            const auto [gp, gq] = grad(p, q);
            // Components can vanish while the gradient does not; compare
            // against the gradient magnitude.
            const double scale = std::max(std::hypot(gp, gq), 1e-8);
            if (std::abs(gp - dp) > kDerivativeTolerance * scale || std::abs(gq - dq) > kDerivativeTolerance * scale) {
                std::ostringstream msg;
                msg << "energy " << name << ": gradient disagrees with finite differences at (" << p << ", " << q
                    << ")";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    return AnisotropicEnergy(std::move(name), std::move(Ft), std::move(grad));
}

AnisotropicEnergy quartic_anisotropic(double sign) {
    return AnisotropicEnergy::custom(
        sign >= 0.0 ? "quartic" : "neg_quartic",
        [sign](double p, double q) {
            const double u = p * p + q * q;
            return sign * u * u;
        },
        [sign](double p, double q) -> std::pair<double, double> {
            const double u = p * p + q * q;
            return {sign * 4.0 * u * p, sign * 4.0 * u * q};
        });
}

AnisotropicEnergy p2q_anisotropic() {
    return AnisotropicEnergy::custom(
        "p2q", [](double p, double q) { return p * p * q; },
        [](double p, double q) -> std::pair<double, double> { return {2.0 * p * q, p * p}; });
}

double energy_density(const Energy& e, double p, double q) {
    if (const auto* iso = std::get_if<IsotropicEnergy>(&e)) return iso->F(p * p + q * q);
    return std::get<AnisotropicEnergy>(e).F(p, q);
}

std::pair<double, double> stress_at(const Energy& e, double p, double q) {
    if (const auto* iso = std::get_if<IsotropicEnergy>(&e)) {
        const double u = p * p + q * q;
        // F'(0) may be infinite for q < 1 power laws; the stress itself vanishes.
        if (u == 0.0) return {0.0, 0.0};
        const double f = iso->Fprime(u);
        return {2.0 * p * f, 2.0 * q * f};
    }
    return std::get<AnisotropicEnergy>(e).grad(p, q);
}

double gradient_dot_stress(const Energy& e, double p, double q) {
    if (const auto* iso = std::get_if<IsotropicEnergy>(&e)) return 2.0 * iso->u_Fprime(p * p + q * q);
    const auto [sp, sq] = std::get<AnisotropicEnergy>(e).grad(p, q);
    return p * sp + q * sq;
}

std::pair<SpectralField, SpectralField> stress(const Energy& e, const SpectralField& wx, const SpectralField& wy,
                                               bool apply_dealias) {
    if (!(wx.grid() == wy.grid())) throw std::invalid_argument("stress: gradient fields on different grids");
    const Grid2D& g = wx.grid();
    auto px = wx.values();
    auto py = wy.values();
    std::vector<double> sx(g.size()), sy(g.size());
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            const auto n = g.index(i, j);
            const auto [a, b] = stress_at(e, px[n], py[n]);
            if (!std::isfinite(a) || !std::isfinite(b)) {
                std::ostringstream msg;
                msg << "stress: non-finite value at grid point (" << i << ", " << j << "), x=" << g.x(i)
                    << ", y=" << g.y(j) << ", grad w=(" << px[n] << ", " << py[n] << ")";
                throw NumericalError(msg.str());
            }
            sx[n] = a;
            sy[n] = b;
        }
    }
    auto fx = SpectralField::from_values(g, std::move(sx));
    auto fy = SpectralField::from_values(g, std::move(sy));
    if (apply_dealias) {
        dealias_in_place(fx);
        dealias_in_place(fy);
    }
    return {std::move(fx), std::move(fy)};
}

std::pair<SpectralField, SpectralField> stress_isotropic(const IsotropicEnergy& F, const SpectralField& wx,
                                                         const SpectralField& wy, bool apply_dealias) {
    return stress(Energy{F}, wx, wy, apply_dealias);
}

std::pair<SpectralField, SpectralField> stress_anisotropic(const AnisotropicEnergy& F, const SpectralField& wx,
                                                           const SpectralField& wy, bool apply_dealias) {
    return stress(Energy{F}, wx, wy, apply_dealias);
}

ConditionReport check_global_condition(const IsotropicEnergy& F, double k, double u_max, int n_samples) {
    if (!(u_max > 0.0) || n_samples < 100)
        throw std::invalid_argument("check_global_condition: need u_max > 0 and n_samples >= 100");
    ConditionReport rep;
    rep.condition = "global";
    rep.parameter = k;
    const auto us = log_samples(u_max, 12.0, n_samples);
    rep.sample_min = us.front();
    rep.sample_max = us.back();
    rep.n_samples = n_samples;
    rep.extreme = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (double u : us) {
        const double f = F.F(u);
        rep.extreme = std::min(rep.extreme, f + k * u);
        scale = std::max(scale, std::abs(f));
    }
    rep.tolerance = kConditionTolerance * scale;
    rep.pass = rep.extreme >= -rep.tolerance;
    rep.closed_form = F.exact_global_condition(k);
    return rep;
}

ConditionReport check_blowup_condition(const IsotropicEnergy& F, double nu, double u_max, int n_samples) {
    if (!(nu > 0.0)) throw std::invalid_argument("check_blowup_condition: nu must be positive");
    if (!(u_max > 0.0) || n_samples < 100)
        throw std::invalid_argument("check_blowup_condition: need u_max > 0 and n_samples >= 100");
    ConditionReport rep;
    rep.condition = "blowup";
    rep.parameter = nu;
    const auto us = log_samples(u_max, 12.0, n_samples);
    rep.sample_min = us.front();
    rep.sample_max = us.back();
    rep.n_samples = n_samples;
    rep.extreme = -std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (double u : us) {
        const double lhs = F.u_Fprime(u);
        const double rhs = (1.0 + 2.0 * nu) * F.F(u);
        rep.extreme = std::max(rep.extreme, lhs - rhs);
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    }
    rep.tolerance = kConditionTolerance * scale;
    rep.pass = rep.extreme <= rep.tolerance;
    rep.closed_form = F.exact_blowup_condition(nu);
    return rep;
}

namespace {

template <typename Visit>
void sample_disk(double radius, int n_samples, ConditionReport& rep, Visit&& visit) {
    const int n_angles = std::max(8, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_samples)))));
    const int n_radii = std::max(2, n_samples / n_angles);
    const auto rs = log_samples(radius, 6.0, n_radii);
    rep.sample_min = rs.front();
    rep.sample_max = rs.back();
    rep.n_samples = n_angles * n_radii;
    for (double r : rs) {
        for (int k = 0; k < n_angles; ++k) {
            const double th = 2.0 * std::numbers::pi * k / n_angles;
            visit(r * std::cos(th), r * std::sin(th));
        }
    }
}

} // namespace

ConditionReport check_global_condition(const AnisotropicEnergy& F, double k, double radius, int n_samples) {
    if (!(radius > 0.0)) throw std::invalid_argument("check_global_condition: radius must be positive");
    ConditionReport rep;
    rep.condition = "global";
    rep.parameter = k;
    rep.extreme = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    sample_disk(radius, n_samples, rep, [&](double p, double q) {
        const double f = F.F(p, q);
        rep.extreme = std::min(rep.extreme, f + k * (p * p + q * q));
        scale = std::max(scale, std::abs(f));
    });
    rep.tolerance = kConditionTolerance * scale;
    rep.pass = rep.extreme >= -rep.tolerance;
    if (F.isotropic_source()) rep.closed_form = F.isotropic_source()->exact_global_condition(k);
    return rep;
}

ConditionReport check_blowup_condition(const AnisotropicEnergy& F, double nu, double radius, int n_samples) {
    if (!(nu > 0.0)) throw std::invalid_argument("check_blowup_condition: nu must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("check_blowup_condition: radius must be positive");
    ConditionReport rep;
    rep.condition = "blowup";
    rep.parameter = nu;
    rep.extreme = -std::numeric_limits<double>::infinity();
    double scale = 1.0;
    sample_disk(radius, n_samples, rep, [&](double p, double q) {
        const auto [gp, gq] = F.grad(p, q);
        const double lhs = p * gp + q * gq;
        const double rhs = 2.0 * (1.0 + 2.0 * nu) * F.F(p, q);
        rep.extreme = std::max(rep.extreme, lhs - rhs);
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    });
    rep.tolerance = kConditionTolerance * scale;
    rep.pass = rep.extreme <= rep.tolerance;
    if (F.isotropic_source()) rep.closed_form = F.isotropic_source()->exact_blowup_condition(nu);
    return rep;
}

} // namespace nlshear

#include "nlshear/nonlocal_operator.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/spectral_ops.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlshear {

OperatorContext::OperatorContext(Grid2D grid, KernelSymbol kernel, Energy energy, OperatorOptions options)
    : grid_(grid), kernel_(std::move(kernel)), energy_(std::move(energy)), options_(options) {
    if (!(options_.floor.epsilon_floor > 0.0 && options_.floor.epsilon_floor < 1.0))
        throw std::invalid_argument("operator: epsilon_floor must lie in (0, 1)");
    symbol_.resize(grid_.size());
    for (int i = 0; i < grid_.nx(); ++i)
        for (int j = 0; j < grid_.ny(); ++j) symbol_[grid_.index(i, j)] = kernel_(grid_.xi_x(i), grid_.xi_y(j));
}

namespace {

void require_grid(const OperatorContext& ctx, const SpectralField& f, const char* op) {
    if (!(f.grid() == ctx.grid())) throw std::invalid_argument(std::string(op) + ": field is not on the context grid");
}

// sum over axes of m(xi) * i xi_axis * s_axis^, Nyquist excluded per axis.
template <typename Multiplier>
SpectralField weighted_divergence(const OperatorContext& ctx, const SpectralField& sx, const SpectralField& sy,
                                  Multiplier&& m, bool multiply_per_axis) {
    const Grid2D& g = ctx.grid();
    auto cx = sx.coefficients();
    auto cy = sy.coefficients();
    std::vector<Complex> out(g.size());
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            const auto n = g.index(i, j);
            const double mult = m(n, i, j);
            const Complex ikx = g.is_nyquist(Axis::x, i, j) ? Complex(0.0) : Complex(0.0, g.xi_x(i));
            const Complex iky = g.is_nyquist(Axis::y, i, j) ? Complex(0.0) : Complex(0.0, g.xi_y(j));
            if (multiply_per_axis)
                out[n] = (mult * ikx) * cx[n] + (mult * iky) * cy[n];
            else
                out[n] = mult * (ikx * cx[n] + iky * cy[n]);
        }
    }
    return SpectralField::from_coefficients(g, std::move(out));
}

SpectralField finish_real(const OperatorContext& ctx, SpectralField f, const char* op) {
    f.values();
    if (f.imaginary_residue() > ctx.options().imag_tolerance) {
        std::ostringstream msg;
        msg << op << ": imaginary residue " << f.imaginary_residue() << " exceeds " << ctx.options().imag_tolerance;
        throw NumericalError(msg.str());
    }
    if (!f.all_finite()) throw NumericalError(std::string(op) + ": non-finite result");
    return f;
}

// Weight beta^^{-p/2} for mode n under the floor policy; returns false when
// the mode is skipped.
bool floored_weight(const OperatorContext& ctx, std::size_t n, double p, double& weight, FloorTelemetry& tel) {
    const double b = ctx.symbol(n);
    if (p > 0.0 && b < ctx.options().floor.epsilon_floor) {
        if (ctx.options().floor.mode == FloorMode::skip) {
            ++tel.skipped_modes;
            return false;
        }
        ++tel.capped_modes;
        weight = std::pow(ctx.options().floor.epsilon_floor, -p / 2.0);
        return true;
    }
    if (p == -2.0)
        weight = b;
    else if (p == 2.0)
        weight = 1.0 / b;
    else
        weight = std::pow(b, -p / 2.0);
    return true;
}

void close_telemetry(const OperatorContext& ctx, FloorTelemetry& tel, double floored, double total, const char* op) {
    tel.skipped_energy_fraction = total > 0.0 ? floored / total : 0.0;
    tel.warning = tel.skipped_energy_fraction > kFloorEnergyWarning;
    if (tel.warning && ctx.options().strict) {
        std::ostringstream msg;
        msg << op << ": floored modes carry " << tel.skipped_energy_fraction << " of the field energy";
        throw NumericalError(msg.str());
    }
}

} // namespace

std::pair<SpectralField, SpectralField> stresses_of(const OperatorContext& ctx, const SpectralField& w) {
    require_grid(ctx, w, "stresses_of");
    const auto [wx, wy] = gradient(w);
    return stress(ctx.energy(), wx, wy, ctx.options().dealias);
}

SpectralField apply_K(const OperatorContext& ctx, const SpectralField& w) {
    const auto [sx, sy] = stresses_of(ctx, w);
    auto out = weighted_divergence(
        ctx, sx, sy, [&](std::size_t n, int, int) { return ctx.symbol(n); }, true);
    return finish_real(ctx, std::move(out), "apply_K");
}

SpectralField local_divergence(const OperatorContext& ctx, const SpectralField& w) {
    const auto [sx, sy] = stresses_of(ctx, w);
    auto out = weighted_divergence(
        ctx, sx, sy, [](std::size_t, int, int) { return 1.0; }, false);
    return finish_real(ctx, std::move(out), "local_divergence");
}

SpectralField apply_local_equivalent(const OperatorContext& ctx, const SpectralField& w) {
    const KernelSymbol& k = ctx.kernel();
    double g1 = 0.0, g2 = 0.0;
    if (k.kind() == KernelKind::bessel_k0) {
        g1 = 1.0;
    } else if (k.kind() == KernelKind::bi_helmholtz) {
        g1 = k.param("gamma1");
        g2 = k.param("gamma2");
    } else {
        throw std::invalid_argument("apply_local_equivalent: kernel '" + k.name() +
                                    "' has no inverse-elliptic local form");
    }
    const Grid2D& g = ctx.grid();
    const auto [sx, sy] = stresses_of(ctx, w);
    auto out = weighted_divergence(
        ctx, sx, sy,
        [&](std::size_t, int i, int j) {
            const double t = g.xi_squared(i, j);
            return 1.0 / (1.0 + g1 * t + g2 * t * t);
        },
        false);
    return finish_real(ctx, std::move(out), "apply_local_equivalent");
}

SpectralField apply_R_power(const OperatorContext& ctx, const SpectralField& f, double p, FloorTelemetry* telemetry) {
    require_grid(ctx, f, "apply_R_power");
    FloorTelemetry tel;
    auto src = f.coefficients();
    std::vector<Complex> out(src.size());
    double total = 0.0, floored = 0.0;
    for (std::size_t n = 0; n < src.size(); ++n) {
        const double e = std::norm(src[n]);
        total += e;
        double weight = 0.0;
        if (!floored_weight(ctx, n, p, weight, tel)) {
            floored += e;
            out[n] = 0.0;
            continue;
        }
        if (ctx.symbol(n) < ctx.options().floor.epsilon_floor && p > 0.0) floored += e;
        out[n] = weight * src[n];
    }
    close_telemetry(ctx, tel, floored, total, "apply_R_power");
    if (telemetry) *telemetry = tel;
    return finish_real(ctx, SpectralField::from_coefficients(ctx.grid(), std::move(out)), "apply_R_power");
}

double R_inner_product(const OperatorContext& ctx, const SpectralField& f, const SpectralField& g,
                       FloorTelemetry* telemetry) {
    require_grid(ctx, f, "R_inner_product");
    require_grid(ctx, g, "R_inner_product");
    FloorTelemetry tel;
    auto a = f.coefficients();
    auto b = g.coefficients();
    double sum = 0.0, total = 0.0, floored = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double e = std::abs(a[n] * std::conj(b[n]));
        total += e;
        double weight = 0.0;
        if (!floored_weight(ctx, n, 2.0, weight, tel)) {
            floored += e;
            continue;
        }
        if (ctx.symbol(n) < ctx.options().floor.epsilon_floor) floored += e;
        sum += weight * (a[n] * std::conj(b[n])).real();
    }
    close_telemetry(ctx, tel, floored, total, "R_inner_product");
    if (telemetry) *telemetry = tel;
    const double N = static_cast<double>(ctx.grid().size());
    return sum * ctx.grid().area() / (N * N);
}

double R_norm_squared(const OperatorContext& ctx, const SpectralField& f, FloorTelemetry* telemetry) {
    return R_inner_product(ctx, f, f, telemetry);
}

} // namespace nlshear

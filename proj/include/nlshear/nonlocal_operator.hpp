// nonlocal_operator.hpp
//
// The right-hand side of the wave system
//     K w = (beta * dF/dw_x)_x + (beta * dF/dw_y)_y
// evaluated spectrally, the multiplier powers R^p = F^-1 beta^(xi)^{-p/2} F,
// and the equivalent local forms used for cross-checks.
//
// Evaluation order for K is fixed: spectral gradient of w, pointwise
// stresses, dealias, forward transform, multiply each stress by
// beta^(xi) * i xi_axis, sum, inverse transform.

#ifndef NLSHEAR_NONLOCAL_OPERATOR_HPP
#define NLSHEAR_NONLOCAL_OPERATOR_HPP

#include "nlshear/kernels.hpp"
#include "nlshear/nonlinearity.hpp"
#include "nlshear/spectral_field.hpp"

#include <vector>

namespace nlshear {

enum class FloorMode { skip, cap };

struct FloorPolicy {
    double epsilon_floor = 1e-280;
    FloorMode mode = FloorMode::skip;
};

struct OperatorOptions {
    FloorPolicy floor;
    bool dealias = true;
    double imag_tolerance = 1e-10;
    bool strict = false;
};

/// Modes where beta^ fell below the floor during an R^p or energy evaluation.
struct FloorTelemetry {
    long skipped_modes = 0;
    long capped_modes = 0;
    double skipped_energy_fraction = 0.0; // share of sum |f^|^2 on floored modes
    bool warning = false;                 // fraction exceeded 1e-8
};

inline constexpr double kFloorEnergyWarning = 1e-8;

class OperatorContext {
public:
    OperatorContext(Grid2D grid, KernelSymbol kernel, Energy energy, OperatorOptions options = {});

    const Grid2D& grid() const { return grid_; }
    const KernelSymbol& kernel() const { return kernel_; }
    const Energy& energy() const { return energy_; }
    const OperatorOptions& options() const { return options_; }

    /// beta^ sampled at grid frequency (i, j).
    double symbol(std::size_t n) const { return symbol_[n]; }
    const std::vector<double>& symbol_table() const { return symbol_; }

private:
    Grid2D grid_;
    KernelSymbol kernel_;
    Energy energy_;
    OperatorOptions options_;
    std::vector<double> symbol_;
};

/// Local stresses of w (dealiased per the context options).
std::pair<SpectralField, SpectralField> stresses_of(const OperatorContext& ctx, const SpectralField& w);

SpectralField apply_K(const OperatorContext& ctx, const SpectralField& w);

/// Multiplies coefficients by beta^^{-p/2}. For p > 0 modes with beta^ below
/// the floor are skipped or capped per policy; in strict mode a floored
/// energy fraction above 1e-8 raises NumericalError.
SpectralField apply_R_power(const OperatorContext& ctx, const SpectralField& f, double p,
                            FloorTelemetry* telemetry = nullptr);

/// ||R f||^2 = area/N^2 * sum beta^^{-1} |f^|^2, with the floor policy.
double R_norm_squared(const OperatorContext& ctx, const SpectralField& f, FloorTelemetry* telemetry = nullptr);
/// <R f, R g> by the same weighted sum.
double R_inner_product(const OperatorContext& ctx, const SpectralField& f, const SpectralField& g,
                       FloorTelemetry* telemetry = nullptr);

/// Inverse-elliptic form for bessel_k0 and bi_helmholtz kernels:
/// (1 - Delta)^{-1} div sigma or (1 - gamma1 Delta + gamma2 Delta^2)^{-1} div sigma.
SpectralField apply_local_equivalent(const OperatorContext& ctx, const SpectralField& w);

/// div sigma with no kernel multiplier (equals R^2 w_tt along solutions).
SpectralField local_divergence(const OperatorContext& ctx, const SpectralField& w);

} // namespace nlshear

#endif

// oracle.hpp
//
// Slow reference computations used to validate the spectral path on small
// grids. None of these run in production simulations.

#ifndef NLSHEAR_ORACLE_HPP
#define NLSHEAR_ORACLE_HPP

#include "nlshear/integrator.hpp"
#include "nlshear/nonlocal_operator.hpp"

#include <cstdint>
#include <vector>

namespace nlshear::oracle {

/// Plain sample array mirroring a SpectralField.
struct DenseField {
    int nx = 0;
    int ny = 0;
    std::vector<double> values;

    DenseField() = default;
    DenseField(int nx_, int ny_);
    static DenseField from(const SpectralField& f);
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * ny + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * ny + j]; }
};

inline constexpr int kMaxDirectPoints = 64 * 64;

/// Kernel samples beta(m dx, n dy) indexed by periodic displacement, taken as
/// the inverse transform of the symbol divided by the cell area.
DenseField kernel_samples(const KernelSymbol& kernel, const Grid2D& grid);

/// (a * b)_i = sum_j a[(i - j) mod n] b[j] * dx dy, the periodic direct sum.
/// Rejects mismatched shapes and grids with more than 64*64 points.
DenseField direct_convolution(const DenseField& a, const DenseField& b, const Grid2D& grid);

/// K w with the beta-convolution done by direct summation: spectral
/// gradient, stresses, dealias, direct convolution, spectral divergence.
DenseField direct_space_K(const OperatorContext& ctx, const SpectralField& w);

/// K w with second-order staggered differences for the gradient and the
/// divergence (convolution still spectral). For F(u) = u/2 and the Dirac
/// kernel this is exactly the 5-point Laplacian.
DenseField finite_difference_K(const OperatorContext& ctx, const SpectralField& w);

struct PicardResult {
    SimState state;                  // iterate at t_end
    std::vector<double> residuals;   // max-norm change of (w, v) per sweep
    bool contracted = false;         // last residual below the previous one, or at round-off
    bool diverged = false;           // residual grew at the last sweep, above round-off
};

/// Fixed-point iteration on
///   w(t) = phi + t psi + int_0^t (t - s) K w(s) ds,   w_t(t) = psi + int_0^t K w(s) ds
/// with trapezoidal quadrature on quad_points uniform nodes in [0, t_end].
PicardResult picard_solve(const OperatorContext& ctx, const SpectralField& phi, const SpectralField& psi,
                          double t_end, int n_iter, int quad_points);

/// Real field with uniform random coefficients on modes |m_x|, |m_y| <= max_mode,
/// scaled so the largest sample is `amplitude`. Deterministic in the seed.
SpectralField random_band_limited(const Grid2D& grid, unsigned long seed, int max_mode, double amplitude = 1.0);

double max_abs_difference(const DenseField& a, const DenseField& b);
double max_abs_difference(const SpectralField& a, const DenseField& b);

} // namespace nlshear::oracle

#endif

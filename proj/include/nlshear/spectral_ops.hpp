// spectral_ops.hpp
//
// Spectral differentiation, 2/3-rule dealiasing and discrete norms.
// Norms use the quadrature weight (lx*ly)/(nx*ny) so they approximate the
// corresponding integrals over the box.

#ifndef NLSHEAR_SPECTRAL_OPS_HPP
#define NLSHEAR_SPECTRAL_OPS_HPP

#include "nlshear/spectral_field.hpp"

#include <utility>

namespace nlshear {

/// Multiplies coefficients by i*xi_axis; the unpaired Nyquist mode of that
/// axis is zeroed. Throws NumericalError on non-finite input.
SpectralField derivative(const SpectralField& f, Axis axis);

/// (f_x, f_y)
std::pair<SpectralField, SpectralField> gradient(const SpectralField& f);

/// Zeroes every mode with |mode_x| > nx/3 or |mode_y| > ny/3.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);
bool in_dealias_band(const Grid2D& grid, int i, int j);

/// sqrt( sum (1+|xi|^2)^s |f^|^2 * area / N^2 ); s = 0 is the L2 norm.
double sobolev_norm(const SpectralField& f, double s);

/// Real-space quadrature L2 norm.
double l2_norm(const SpectralField& f);

/// Real-space quadrature of f*g.
double inner_product(const SpectralField& f, const SpectralField& g);

/// max over grid points of sqrt(f_x^2 + f_y^2).
double sup_norm_gradient(const SpectralField& f);

/// max |f| over the outermost ring of grid points (i or j equal to 0 or n-1).
double boundary_ring_max(const SpectralField& f);

} // namespace nlshear

#endif

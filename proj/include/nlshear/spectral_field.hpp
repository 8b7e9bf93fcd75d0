// spectral_field.hpp
//
// Real 2D field on a periodic grid carrying both its samples and its
// discrete Fourier coefficients. Each representation is synchronized lazily
// from the other on first access after a write.
//
// Transform convention: the forward transform carries no prefactor, the
// inverse carries 1/(nx*ny). Coefficient (i, j) belongs to the wavenumber
// (grid.xi_x(i), grid.xi_y(j)).

#ifndef NLSHEAR_SPECTRAL_FIELD_HPP
#define NLSHEAR_SPECTRAL_FIELD_HPP

#include "nlshear/grid.hpp"

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace nlshear {

using Complex = std::complex<double>;

namespace fft {
// In-place transforms of a full nx*ny complex array. Plans are cached per
// grid shape; planning is serialized, execution is reentrant.
void forward(const Grid2D& grid, std::span<Complex> data);
void inverse(const Grid2D& grid, std::span<Complex> data); // includes 1/(nx*ny)
} // namespace fft

class SpectralField {
public:
    explicit SpectralField(const Grid2D& grid);

    static SpectralField from_values(const Grid2D& grid, std::vector<double> values);
    static SpectralField from_coefficients(const Grid2D& grid, std::vector<Complex> coefficients);
    static SpectralField from_function(const Grid2D& grid, const std::function<double(double, double)>& f);

    const Grid2D& grid() const { return grid_; }

    std::span<const double> values() const;
    std::span<const Complex> coefficients() const;

    // Write access invalidates the other representation.
    std::span<double> mutable_values();
    std::span<Complex> mutable_coefficients();

    double operator()(int i, int j) const { return values()[grid_.index(i, j)]; }

    // max|Im| / max|Re| discarded by the most recent inverse synchronization.
    double imaginary_residue() const { return imag_residue_; }

    bool all_finite() const;
    double max_abs() const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    // this += s * other, in real space
    SpectralField& axpy(double s, const SpectralField& other);

private:
    void sync_values() const;
    void sync_coefficients() const;

    Grid2D grid_;
    mutable std::vector<double> values_;
    mutable std::vector<Complex> coefficients_;
    mutable bool values_valid_ = true;
    mutable bool coefficients_valid_ = false;
    mutable double imag_residue_ = 0.0;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

} // namespace nlshear

#endif

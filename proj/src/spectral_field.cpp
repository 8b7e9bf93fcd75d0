#include "nlshear/spectral_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace nlshear {

namespace {

// FFTW_ESTIMATE keeps plan selection deterministic, so repeated runs are
// bitwise reproducible.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    std::pair<fftw_plan, fftw_plan> plans(int nx, int ny) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find({nx, ny});
        if (it != plans_.end()) return it->second;
        auto* buffer = fftw_alloc_complex(static_cast<std::size_t>(nx) * ny);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan fwd = fftw_plan_dft_2d(nx, ny, buffer, buffer, FFTW_FORWARD, flags);
        fftw_plan inv = fftw_plan_dft_2d(nx, ny, buffer, buffer, FFTW_BACKWARD, flags);
        fftw_free(buffer);
        if (!fwd || !inv) throw std::runtime_error("fft: plan creation failed");
        return plans_.emplace(std::pair{nx, ny}, std::pair{fwd, inv}).first->second;
    }

    ~PlanCache() {
        for (auto& [shape, p] : plans_) {
            fftw_destroy_plan(p.first);
            fftw_destroy_plan(p.second);
        }
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, std::pair<fftw_plan, fftw_plan>> plans_;
};

fftw_complex* as_fftw(std::span<Complex> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

} // namespace

namespace fft {

void forward(const Grid2D& grid, std::span<Complex> data) {
    if (data.size() != grid.size()) throw std::invalid_argument("fft: size mismatch");
    auto plan = PlanCache::instance().plans(grid.nx(), grid.ny()).first;
    fftw_execute_dft(plan, as_fftw(data), as_fftw(data));
}

void inverse(const Grid2D& grid, std::span<Complex> data) {
    if (data.size() != grid.size()) throw std::invalid_argument("fft: size mismatch");
    auto plan = PlanCache::instance().plans(grid.nx(), grid.ny()).second;
    fftw_execute_dft(plan, as_fftw(data), as_fftw(data));
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : data) c *= scale;
}

} // namespace fft

SpectralField::SpectralField(const Grid2D& grid) : grid_(grid), values_(grid.size(), 0.0) {}

SpectralField SpectralField::from_values(const Grid2D& grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw std::invalid_argument("SpectralField: value count does not match grid");
    SpectralField f(grid);
    f.values_ = std::move(values);
    return f;
}

SpectralField SpectralField::from_coefficients(const Grid2D& grid, std::vector<Complex> coefficients) {
    if (coefficients.size() != grid.size())
        throw std::invalid_argument("SpectralField: coefficient count does not match grid");
    SpectralField f(grid);
    f.coefficients_ = std::move(coefficients);
    f.coefficients_valid_ = true;
    f.values_valid_ = false;
    return f;
}

SpectralField SpectralField::from_function(const Grid2D& grid, const std::function<double(double, double)>& fn) {
    SpectralField f(grid);
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) f.values_[grid.index(i, j)] = fn(grid.x(i), grid.y(j));
    return f;
}

std::span<const double> SpectralField::values() const {
    sync_values();
    return values_;
}

std::span<const Complex> SpectralField::coefficients() const {
    sync_coefficients();
    return coefficients_;
}

std::span<double> SpectralField::mutable_values() {
    sync_values();
    coefficients_valid_ = false;
    return values_;
}

std::span<Complex> SpectralField::mutable_coefficients() {
    sync_coefficients();
    values_valid_ = false;
    return coefficients_;
}

void SpectralField::sync_values() const {
    if (values_valid_) return;
    std::vector<Complex> work(coefficients_);
    fft::inverse(grid_, work);
    values_.resize(work.size());
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t n = 0; n < work.size(); ++n) {
        values_[n] = work[n].real();
        max_re = std::max(max_re, std::abs(work[n].real()));
        max_im = std::max(max_im, std::abs(work[n].imag()));
    }
    imag_residue_ = max_re > 0.0 ? max_im / max_re : max_im;
    values_valid_ = true;
}

void SpectralField::sync_coefficients() const {
    if (coefficients_valid_) return;
    coefficients_.assign(values_.begin(), values_.end());
    fft::forward(grid_, coefficients_);
    coefficients_valid_ = true;
}

bool SpectralField::all_finite() const {
    const auto v = values();
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (double x : values()) m = std::max(m, std::abs(x));
    return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return axpy(1.0, other); }

SpectralField& SpectralField::operator-=(const SpectralField& other) { return axpy(-1.0, other); }

SpectralField& SpectralField::operator*=(double s) {
    for (double& x : mutable_values()) x *= s;
    return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& other) {
    if (!(other.grid_ == grid_)) throw std::invalid_argument("SpectralField: grid mismatch");
    auto dst = mutable_values();
    auto src = other.values();
    for (std::size_t n = 0; n < dst.size(); ++n) dst[n] += s * src[n];
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

} // namespace nlshear

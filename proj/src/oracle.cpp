#include "nlshear/oracle.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nlshear::oracle {

DenseField::DenseField(int nx_, int ny_)
    : nx(nx_), ny(ny_), values(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_), 0.0) {}

DenseField DenseField::from(const SpectralField& f) {
    DenseField d(f.grid().nx(), f.grid().ny());
    auto v = f.values();
    d.values.assign(v.begin(), v.end());
    return d;
}

DenseField kernel_samples(const KernelSymbol& kernel, const Grid2D& grid) {
    std::vector<Complex> c(grid.size());
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) c[grid.index(i, j)] = kernel(grid.xi_x(i), grid.xi_y(j));
    fft::inverse(grid, c);
    DenseField out(grid.nx(), grid.ny());
    const double inv_area = 1.0 / grid.cell_area();
    for (std::size_t n = 0; n < c.size(); ++n) out.values[n] = c[n].real() * inv_area;
    return out;
}

DenseField direct_convolution(const DenseField& a, const DenseField& b, const Grid2D& grid) {
    if (a.nx != b.nx || a.ny != b.ny || a.nx != grid.nx() || a.ny != grid.ny())
        throw std::invalid_argument("direct_convolution: shape mismatch");
    if (a.nx * a.ny > kMaxDirectPoints)
        throw std::invalid_argument("direct_convolution: grid exceeds the 64x64 oracle cap");
    const int nx = a.nx, ny = a.ny;
    DenseField out(nx, ny);
    const double w = grid.cell_area();
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double sum = 0.0;
            for (int k = 0; k < nx; ++k) {
                const int di = (i - k + nx) % nx;
                for (int l = 0; l < ny; ++l) sum += a.at(di, (j - l + ny) % ny) * b.at(k, l);
            }
            out.at(i, j) = sum * w;
        }
    }
    return out;
}

DenseField direct_space_K(const OperatorContext& ctx, const SpectralField& w) {
    const Grid2D& g = ctx.grid();
    const auto [sx, sy] = stresses_of(ctx, w);
    const DenseField beta = kernel_samples(ctx.kernel(), g);
    DenseField cx = direct_convolution(beta, DenseField::from(sx), g);
    DenseField cy = direct_convolution(beta, DenseField::from(sy), g);
    SpectralField dx = derivative(SpectralField::from_values(g, std::move(cx.values)), Axis::x);
    SpectralField dy = derivative(SpectralField::from_values(g, std::move(cy.values)), Axis::y);
    dx += dy;
    return DenseField::from(dx);
}

DenseField finite_difference_K(const OperatorContext& ctx, const SpectralField& w) {
    const Grid2D& g = ctx.grid();
    const int nx = g.nx(), ny = g.ny();
    const double hx = g.dx(), hy = g.dy();
    auto W = [&](int i, int j) { return w(((i % nx) + nx) % nx, ((j % ny) + ny) % ny); };

    // sx lives at (i + 1/2, j), sy at (i, j + 1/2).
    std::vector<double> sx(g.size()), sy(g.size());
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double p_x = (W(i + 1, j) - W(i, j)) / hx;
            const double q_x = (W(i, j + 1) - W(i, j - 1) + W(i + 1, j + 1) - W(i + 1, j - 1)) / (4.0 * hy);
            sx[g.index(i, j)] = stress_at(ctx.energy(), p_x, q_x).first;
            const double q_y = (W(i, j + 1) - W(i, j)) / hy;
            const double p_y = (W(i + 1, j) - W(i - 1, j) + W(i + 1, j + 1) - W(i - 1, j + 1)) / (4.0 * hx);
            sy[g.index(i, j)] = stress_at(ctx.energy(), p_y, q_y).second;
        }
    }
    // Convolution commutes with the half-cell shift, so the symbol applies as is.
    auto convolve = [&](std::vector<double> s) {
        SpectralField f = SpectralField::from_values(g, std::move(s));
        auto c = f.mutable_coefficients();
        for (std::size_t n = 0; n < c.size(); ++n) c[n] *= ctx.symbol(n);
        auto v = f.values();
        return std::vector<double>(v.begin(), v.end());
    };
    const auto Sx = convolve(std::move(sx));
    const auto Sy = convolve(std::move(sy));

    DenseField out(nx, ny);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int im = (i - 1 + nx) % nx, jm = (j - 1 + ny) % ny;
            out.at(i, j) = (Sx[g.index(i, j)] - Sx[g.index(im, j)]) / hx + (Sy[g.index(i, j)] - Sy[g.index(i, jm)]) / hy;
        }
    }
    return out;
}

PicardResult picard_solve(const OperatorContext& ctx, const SpectralField& phi, const SpectralField& psi,
                          double t_end, int n_iter, int quad_points) {
    if (n_iter < 4) throw std::invalid_argument("picard_solve: n_iter must be >= 4");
    if (quad_points < 2) throw std::invalid_argument("picard_solve: quad_points must be >= 2");
    if (!(t_end > 0.0)) throw std::invalid_argument("picard_solve: t_end must be positive");
    const auto Q = static_cast<std::size_t>(quad_points);
    const double h = t_end / static_cast<double>(Q - 1);
    auto tau = [h](std::size_t k) { return h * static_cast<double>(k); };

    std::vector<SpectralField> W, V;
    W.reserve(Q);
    V.reserve(Q);
    for (std::size_t k = 0; k < Q; ++k) {
        SpectralField wk = phi;
        wk.axpy(tau(k), psi);
        W.push_back(std::move(wk));
        V.push_back(psi);
    }

    PicardResult res{SimState(phi, psi, 0.0, 0), {}, false, false};
    for (int sweep = 0; sweep < n_iter; ++sweep) {
        std::vector<SpectralField> KW;
        KW.reserve(Q);
        for (const auto& wk : W) KW.push_back(apply_K(ctx, wk));

        double residual = 0.0;
        std::vector<SpectralField> Wn, Vn;
        Wn.reserve(Q);
        Vn.reserve(Q);
        for (std::size_t i = 0; i < Q; ++i) {
            SpectralField wi = phi;
            wi.axpy(tau(i), psi);
            SpectralField vi = psi;
            for (std::size_t j = 0; i > 0 && j <= i; ++j) {
                const double c = (j == 0 || j == i) ? 0.5 * h : h;
                wi.axpy(c * (tau(i) - tau(j)), KW[j]);
                vi.axpy(c, KW[j]);
            }
            auto a = wi.values(), b = W[i].values(), c = vi.values(), d = V[i].values();
            for (std::size_t n = 0; n < a.size(); ++n)
                residual = std::max({residual, std::abs(a[n] - b[n]), std::abs(c[n] - d[n])});
            Wn.push_back(std::move(wi));
            Vn.push_back(std::move(vi));
        }
        W = std::move(Wn);
        V = std::move(Vn);
        res.residuals.push_back(residual);
        if (!std::isfinite(residual)) break;
    }

    // Once the change is at round-off of the iterates it no longer shrinks.
    double scale = 0.0;
    for (std::size_t k = 0; k < Q; ++k) scale = std::max({scale, W[k].max_abs(), V[k].max_abs()});
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
    const auto& r = res.residuals;
    if (r.size() >= 2) {
        const double last = r.back(), prev = r[r.size() - 2];
        res.contracted = last <= floor || last < prev;
        res.diverged = !(last <= prev) && !(last <= floor);
    }
    res.state = SimState(W.back(), V.back(), t_end, static_cast<long>(n_iter));
    return res;
}

SpectralField random_band_limited(const Grid2D& grid, unsigned long seed, int max_mode, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Term {
        int mx, my;
        double a, b;
    };
    std::vector<Term> terms;
    for (int mx = 0; mx <= max_mode; ++mx)
        for (int my = -max_mode; my <= max_mode; ++my)
            if (mx > 0 || my >= 0) terms.push_back({mx, my, u(rng), u(rng)});
    const double kx = 2.0 * std::numbers::pi / grid.lx(), ky = 2.0 * std::numbers::pi / grid.ly();
    SpectralField f = SpectralField::from_function(grid, [&](double x, double y) {
        double s = 0.0;
        for (const auto& t : terms) {
            const double ph = kx * t.mx * x + ky * t.my * y;
            s += t.a * std::cos(ph) + t.b * std::sin(ph);
        }
        return s;
    });
    const double m = f.max_abs();
    if (m > 0.0) f *= amplitude / m;
    return f;
}

double max_abs_difference(const DenseField& a, const DenseField& b) {
    if (a.values.size() != b.values.size()) throw std::invalid_argument("max_abs_difference: size mismatch");
    double m = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n) m = std::max(m, std::abs(a.values[n] - b.values[n]));
    return m;
}

double max_abs_difference(const SpectralField& a, const DenseField& b) {
    return max_abs_difference(DenseField::from(a), b);
}

} // namespace nlshear::oracle

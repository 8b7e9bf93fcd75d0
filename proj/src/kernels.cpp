#include "nlshear/kernels.hpp"

#include "nlshear/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nlshear {

KernelSymbol::KernelSymbol(std::string name, KernelKind kind, SymbolFn symbol, double r, double C,
                           std::map<std::string, double> params, bool in_decay_class)
    : name_(std::move(name)), kind_(kind), symbol_(std::move(symbol)), r_(r), C_(C), params_(std::move(params)),
      in_decay_class_(in_decay_class) {}

double KernelSymbol::effective_r() const {
    if (!has_infinite_rate()) return r_;
    auto it = params_.find("effective_r");
    return it == params_.end() ? 10.0 : it->second;
}

double KernelSymbol::param(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) throw std::out_of_range("kernel " + name_ + " has no parameter '" + key + "'");
    return it->second;
}

KernelSymbol gaussian(double effective_r) {
    if (!(effective_r >= 2.0) || !std::isfinite(effective_r))
        throw std::invalid_argument("gaussian: effective_r must be finite and >= 2");
    // sup over t >= 0 of e^{-t/2} (1+t)^{r/2} sits at t = r - 1.
    const double C = std::exp(-(effective_r - 1.0) / 2.0) * std::pow(effective_r, effective_r / 2.0);
    return KernelSymbol(
        "gaussian", KernelKind::gaussian,
        [](double a, double b) { return std::exp(-(a * a + b * b) / 2.0); }, kInfiniteRate, C,
        {{"effective_r", effective_r}}, true);
}

KernelSymbol bessel_k0() {
    return KernelSymbol(
        "bessel_k0", KernelKind::bessel_k0, [](double a, double b) { return 1.0 / (1.0 + a * a + b * b); }, 2.0,
        1.0, {}, true);
}

KernelSymbol bi_helmholtz(double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > 0.0) || !std::isfinite(c1) || !std::isfinite(c2))
        throw std::invalid_argument("bi_helmholtz: c1 and c2 must be positive");
    if (c1 == c2) throw std::invalid_argument("bi_helmholtz: c1 == c2 makes the real-space kernel undefined");
    const double g1 = c1 * c1 + c2 * c2;
    const double g2 = c1 * c1 * c2 * c2;
    // 1 + g1 t + g2 t^2 >= (1+t)^2 * min(1, g1/2, g2), so C = 1/min(...).
    const double C = 1.0 / std::min({1.0, g1 / 2.0, g2});
    return KernelSymbol(
        "bi_helmholtz", KernelKind::bi_helmholtz,
        [g1, g2](double a, double b) {
            const double t = a * a + b * b;
            return 1.0 / (1.0 + g1 * t + g2 * t * t);
        },
        4.0, C, {{"c1", c1}, {"c2", c2}, {"gamma1", g1}, {"gamma2", g2}}, true);
}

KernelSymbol dirac() {
    return KernelSymbol("dirac", KernelKind::dirac, [](double, double) { return 1.0; }, 0.0, 1.0, {}, false);
}

KernelSymbol tabulated(const std::string& csv_path, const Grid2D& grid, double r, double C) {
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("tabulated kernel: cannot open " + csv_path);
    auto table = std::make_shared<std::vector<double>>(grid.size(), std::numeric_limits<double>::quiet_NaN());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a, b, value;
        if (!(row >> a >> b >> value)) {
            if (line_no == 1) continue; // header
            throw ConfigError("tabulated kernel: malformed row " + std::to_string(line_no) + " in " + csv_path);
        }
        const double ma = a * grid.lx() / (2.0 * std::numbers::pi);
        const double mb = b * grid.ly() / (2.0 * std::numbers::pi);
        const long ia = std::lround(ma), ib = std::lround(mb);
        if (std::abs(ma - ia) > 1e-6 || std::abs(mb - ib) > 1e-6 || ia < -grid.nx() / 2 || ia >= grid.nx() / 2 ||
            ib < -grid.ny() / 2 || ib >= grid.ny() / 2)
            throw ConfigError("tabulated kernel: row " + std::to_string(line_no) + " is not a grid frequency");
        const int i = static_cast<int>((ia + grid.nx()) % grid.nx());
        const int j = static_cast<int>((ib + grid.ny()) % grid.ny());
        (*table)[grid.index(i, j)] = value;
    }
    for (double v : *table)
        if (std::isnan(v)) throw ConfigError("tabulated kernel: " + csv_path + " does not cover every grid frequency");

    const Grid2D g = grid;
    auto lookup = [table, g](double a, double b) {
        const long ia = std::lround(a * g.lx() / (2.0 * std::numbers::pi));
        const long ib = std::lround(b * g.ly() / (2.0 * std::numbers::pi));
        const int i = static_cast<int>(((ia % g.nx()) + g.nx()) % g.nx());
        const int j = static_cast<int>(((ib % g.ny()) + g.ny()) % g.ny());
        return (*table)[g.index(i, j)];
    };
    return KernelSymbol("tabulated", KernelKind::tabulated, lookup, r, C, {}, true);
}

DecayReport validate_decay(const KernelSymbol& kernel, const Grid2D& grid) {
    return validate_decay(kernel, grid, kernel.effective_r(), kernel.C());
}

DecayReport validate_decay(const KernelSymbol& kernel, const Grid2D& grid, double r, double C) {
    DecayReport rep;
    rep.kernel = kernel.name();
    rep.r = r;
    rep.C = C;
    rep.in_decay_class = kernel.in_decay_class() && r >= 2.0;
    rep.min_symbol = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) {
            const double s = kernel(grid.xi_x(i), grid.xi_y(j));
            rep.min_symbol = std::min(rep.min_symbol, s);
            const double weight = std::pow(1.0 + grid.xi_squared(i, j), r / 2.0);
            rep.empirical_C = std::max(rep.empirical_C, s * weight);
        }
    }
    rep.nonnegative = rep.min_symbol >= 0.0;
    rep.bounded = rep.empirical_C <= C * (1.0 + 1e-12);
    return rep;
}

double max_linear_frequency(const KernelSymbol& kernel, const Grid2D& grid) {
    double w = 0.0;
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j)
            w = std::max(w, std::sqrt(grid.xi_squared(i, j) * std::max(0.0, kernel(grid.xi_x(i), grid.xi_y(j)))));
    return w;
}

} // namespace nlshear

// kernels.hpp
//
// Convolution kernels represented by their Fourier symbols beta^(xi), with
// the decay-class metadata (r, C) of
//     0 <= beta^(xi) <= C (1 + |xi|^2)^(-r/2).

#ifndef NLSHEAR_KERNELS_HPP
#define NLSHEAR_KERNELS_HPP

#include "nlshear/grid.hpp"

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>

namespace nlshear {

enum class KernelKind { gaussian, bessel_k0, bi_helmholtz, dirac, tabulated };

class KernelSymbol {
public:
    using SymbolFn = std::function<double(double, double)>;

    KernelSymbol(std::string name, KernelKind kind, SymbolFn symbol, double r, double C,
                 std::map<std::string, double> params, bool in_decay_class);

    const std::string& name() const { return name_; }
    KernelKind kind() const { return kind_; }
    double operator()(double xi1, double xi2) const { return symbol_(xi1, xi2); }

    /// Declared decay rate; +infinity for super-polynomial decay.
    double r() const { return r_; }
    double C() const { return C_; }
    bool has_infinite_rate() const { return r_ == std::numeric_limits<double>::infinity(); }
    /// Rate used by validation reports; equals r() unless r() is infinite.
    double effective_r() const;

    /// Kernel-specific parameters (c1, c2, gamma1, gamma2, effective_r, ...).
    const std::map<std::string, double>& params() const { return params_; }
    double param(const std::string& key) const;

    /// False for the Dirac limit, which lies outside the decay class.
    bool in_decay_class() const { return in_decay_class_; }

private:
    std::string name_;
    KernelKind kind_;
    SymbolFn symbol_;
    double r_;
    double C_;
    std::map<std::string, double> params_;
    bool in_decay_class_;
};

inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

/// e^{-|xi|^2/2}. Any r is admissible; C is the sharp constant for the
/// chosen effective rate, sup_t e^{-t/2}(1+t)^{r/2}.
KernelSymbol gaussian(double effective_r = 10.0);

/// (1 + |xi|^2)^{-1}; r = 2, C = 1.
KernelSymbol bessel_k0();

/// [1 + gamma1 |xi|^2 + gamma2 |xi|^4]^{-1} with gamma1 = c1^2 + c2^2 and
/// gamma2 = c1^2 c2^2; r = 4. Rejects c1 == c2 and non-positive parameters.
KernelSymbol bi_helmholtz(double c1, double c2);

/// Symbol identically 1: the local limit. Not in the decay class.
KernelSymbol dirac();

/// Symbol tabulated on the exact grid frequencies of `grid`, read from a CSV
/// of (xi1, xi2, value) rows. Every grid frequency must be present.
KernelSymbol tabulated(const std::string& csv_path, const Grid2D& grid, double r, double C);

struct DecayReport {
    std::string kernel;
    double r = 0.0;               // rate tested against
    double C = 0.0;               // constant tested against
    double min_symbol = 0.0;      // over grid frequencies
    double empirical_C = 0.0;     // max of symbol * (1+|xi|^2)^{r/2}
    bool nonnegative = false;
    bool bounded = false;
    bool in_decay_class = false;
    bool pass() const { return nonnegative && bounded && in_decay_class; }
};

/// Checks nonnegativity and the decay bound on every grid frequency. The
/// bound is tested with a relative slack of 1e-12 so equality cases pass.
DecayReport validate_decay(const KernelSymbol& kernel, const Grid2D& grid);
/// Same check against an explicitly claimed (r, C).
DecayReport validate_decay(const KernelSymbol& kernel, const Grid2D& grid, double r, double C);

/// max over grid frequencies of |xi| sqrt(beta^(xi)): the largest linear
/// frequency for F(u) = u/2.
double max_linear_frequency(const KernelSymbol& kernel, const Grid2D& grid);

} // namespace nlshear

#endif

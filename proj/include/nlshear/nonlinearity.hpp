// nonlinearity.hpp
//
// Strain-energy densities and the stresses they induce.
//
//   isotropic:    F(u), u = |grad w|^2,  stress = (2 w_x F'(u), 2 w_y F'(u))
//   anisotropic:  Ft(p, q) with p = w_x, q = w_y,  stress = grad Ft(w_x, w_y)
//
// Plus the sampled checkers for the global-existence hypothesis
// F(u) >= -k u and the blow-up hypothesis u F'(u) <= (1 + 2 nu) F(u).

#ifndef NLSHEAR_NONLINEARITY_HPP
#define NLSHEAR_NONLINEARITY_HPP

#include "nlshear/spectral_field.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace nlshear {

struct PowerLaw {
    double a = 0.0;
    double q = 1.0;
};

class IsotropicEnergy {
public:
    using Fn = std::function<double(double)>;

    /// a u^q with the exact derivative a q u^{q-1}. Requires q > 0.
    static IsotropicEnergy power_law(double a, double q);
    /// u/2 + G(u).
    static IsotropicEnergy linear_plus(const IsotropicEnergy& G);
    /// Arbitrary (F, F'); checks F(0) = 0 and F' against centered
    /// differences on (0, u_max]. Throws std::invalid_argument on mismatch.
    static IsotropicEnergy custom(std::string name, Fn F, Fn Fprime, double u_max = 10.0);

    double F(double u) const { return F_(u); }
    double Fprime(double u) const { return Fprime_(u); }
    /// u F'(u), taken as 0 at u = 0 (finite for every power law with q > 0).
    double u_Fprime(double u) const { return u == 0.0 ? 0.0 : u * Fprime_(u); }

    const std::string& name() const { return name_; }
    /// Set for pure power laws only.
    const std::optional<PowerLaw>& power_law_params() const { return power_; }
    /// Set for linear_plus.
    const std::shared_ptr<const IsotropicEnergy>& inner() const { return inner_; }

    /// Closed-form verdicts, available for pure power laws.
    std::optional<bool> exact_global_condition(double k) const;
    std::optional<bool> exact_blowup_condition(double nu) const;

private:
    IsotropicEnergy(std::string name, Fn F, Fn Fprime);

    std::string name_;
    Fn F_;
    Fn Fprime_;
    std::optional<PowerLaw> power_;
    std::shared_ptr<const IsotropicEnergy> inner_;
};

class AnisotropicEnergy {
public:
    using Fn = std::function<double(double, double)>;
    using GradFn = std::function<std::pair<double, double>(double, double)>;

    /// Ft(p, q) = F(p^2 + q^2), gradient 2 F'(u) (p, q).
    static AnisotropicEnergy from_isotropic(const IsotropicEnergy& F);
    /// Arbitrary (Ft, grad Ft); checks Ft(0,0) = 0 and the gradient against
    /// centered differences on a disk of the given radius.
    static AnisotropicEnergy custom(std::string name, Fn Ft, GradFn grad, double radius = 3.0);

    double F(double p, double q) const { return F_(p, q); }
    std::pair<double, double> grad(double p, double q) const { return grad_(p, q); }

    const std::string& name() const { return name_; }
    const std::shared_ptr<const IsotropicEnergy>& isotropic_source() const { return source_; }

private:
    AnisotropicEnergy(std::string name, Fn F, GradFn grad);

    std::string name_;
    Fn F_;
    GradFn grad_;
    std::shared_ptr<const IsotropicEnergy> source_;
};

/// (p^2 + q^2)^2 scaled by `sign`.
AnisotropicEnergy quartic_anisotropic(double sign = 1.0);
/// p^2 q, gradient (2pq, p^2).
AnisotropicEnergy p2q_anisotropic();

using Energy = std::variant<IsotropicEnergy, AnisotropicEnergy>;

/// Energy density at gradient (p, q).
double energy_density(const Energy& e, double p, double q);
/// Local stress vector at gradient (p, q).
std::pair<double, double> stress_at(const Energy& e, double p, double q);
/// grad w . stress: 2 u F'(u) for isotropic energies.
double gradient_dot_stress(const Energy& e, double p, double q);

/// Pointwise stresses from the gradient fields; optionally dealiased.
/// Throws NumericalError naming the first grid point where the stress is
/// not finite.
std::pair<SpectralField, SpectralField> stress_isotropic(const IsotropicEnergy& F, const SpectralField& wx,
                                                         const SpectralField& wy, bool dealias = true);
std::pair<SpectralField, SpectralField> stress_anisotropic(const AnisotropicEnergy& F, const SpectralField& wx,
                                                           const SpectralField& wy, bool dealias = true);
std::pair<SpectralField, SpectralField> stress(const Energy& e, const SpectralField& wx, const SpectralField& wy,
                                               bool dealias = true);

struct ConditionReport {
    std::string condition;   // "global" or "blowup"
    double parameter = 0.0;  // k or nu
    double sample_min = 0.0; // smallest sampled |U| (or u)
    double sample_max = 0.0; // largest sampled |U| (or u)
    int n_samples = 0;
    double extreme = 0.0;    // min of F + k u (global) or max of u F' - (1+2nu) F (blow-up)
    double tolerance = 0.0;
    bool pass = false;
    std::optional<bool> closed_form; // exact verdict when the family has one
};

/// min over log-uniform u in [u_max*1e-12, u_max] of F(u) + k u; passes when
/// that is >= -1e-12 * max(1, max |F|).
ConditionReport check_global_condition(const IsotropicEnergy& F, double k, double u_max, int n_samples);

/// max over the same samples of u F'(u) - (1 + 2 nu) F(u); passes when that is
/// <= 1e-12 * max(1, max |u F'|, max |(1+2nu) F|).
ConditionReport check_blowup_condition(const IsotropicEnergy& F, double nu, double u_max, int n_samples);

/// Anisotropic forms: Ft(U) >= -k |U|^2 and U . grad Ft(U) <= 2 (1 + 2 nu) Ft(U),
/// sampled uniformly in angle and log-uniformly in |U| on the disk of the
/// given radius.
ConditionReport check_global_condition(const AnisotropicEnergy& F, double k, double radius, int n_samples);
ConditionReport check_blowup_condition(const AnisotropicEnergy& F, double nu, double radius, int n_samples);

} // namespace nlshear

#endif

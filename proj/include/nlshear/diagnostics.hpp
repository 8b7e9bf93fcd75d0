// diagnostics.hpp
//
// Scalar functionals along a trajectory:
//
//   E(t)  = 1/2 ||R w_t||^2 + integral F(|grad w|^2)
//   H(t)  = ||R w||^2 + b (t + t0)^2
//   H'    = 2 <R w_t, R w> + 2 b (t + t0)
//   H''   = 2 ||R w_t||^2 + 2 <R^2 w_tt, w> + 2 b
//
// The pairing <R^2 w_tt, w> is evaluated as -integral grad w . sigma(grad w)
// (= -2 integral u F'(u) for isotropic energies), so no unbounded multiplier
// acts on w_tt.

#ifndef NLSHEAR_DIAGNOSTICS_HPP
#define NLSHEAR_DIAGNOSTICS_HPP

#include "nlshear/integrator.hpp"
#include "nlshear/nonlocal_operator.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nlshear {

struct LevineConfig {
    double nu = 0.5;
    double b = 1.0;
    double t0 = 1.0;
    bool b_auto = false;
    bool t0_auto = false;
    bool t0_raised = false;
    /// True when E(0) < 0, i.e. the setup is an admissible blow-up argument
    /// rather than a diagnostic-only choice.
    bool admissible = false;

    /// Builds the configuration for initial energy E0 and initial pairing
    /// <R phi, R psi>.
    ///  - E0 < 0: b defaults to -2 E0; an explicit b must satisfy 0 < b <= -2 E0.
    ///  - E0 >= 0: b must be given or defaults to 1 (diagnostic only).
    ///  - t0 defaults to max(1, (1 + |<R phi, R psi>|) / b); an explicit t0 is
    ///    doubled until H'(0) = 2 <R phi, R psi> + 2 b t0 > 0.
    static LevineConfig make(double nu, double E0, double pairing0, std::optional<double> b = std::nullopt,
                             std::optional<double> t0 = std::nullopt);
};

struct LevineValues {
    double H = 0.0;
    double Hprime = 0.0;
    double Hdoubleprime = 0.0;
    double concavity_residual() const;
    double nu = 0.5;
};

struct EnergyParts {
    double kinetic = 0.0;   // 1/2 ||R v||^2
    double potential = 0.0; // quadrature of F(grad w)
    double total() const { return kinetic + potential; }
    FloorTelemetry floor;
};

EnergyParts energy_parts(const OperatorContext& ctx, const SimState& state);
double energy(const OperatorContext& ctx, const SimState& state);

/// <R^2 w_tt, w> via the local-divergence identity.
double pairing_identity(const OperatorContext& ctx, const SpectralField& w);

LevineValues levine_H(const OperatorContext& ctx, const SimState& state, const LevineConfig& cfg,
                      FloorTelemetry* telemetry = nullptr);

/// H0 / (nu H'0). Throws std::invalid_argument unless all inputs are positive.
double levine_bound(const LevineConfig& cfg, double H0, double Hprime0);
double levine_bound(double nu, double H0, double Hprime0);

struct DiagnosticsRecord {
    double t = 0.0;
    double E = 0.0;
    double H = 0.0;
    double Hprime = 0.0;
    double Hdoubleprime = 0.0;
    double concavity_residual = 0.0;
    double sup_grad = 0.0;
    double l2_w = 0.0;
    double sobolev_w = 0.0;
    double sobolev_v = 0.0;
    double skipped_mode_energy_fraction = 0.0;

    static const std::vector<std::string>& column_names();
    std::vector<double> columns() const;
};

/// Evaluates every column. sup_grad may be passed in when already known.
DiagnosticsRecord record(const OperatorContext& ctx, const SimState& state, const LevineConfig& cfg,
                         double sobolev_s, std::optional<double> sup_grad = std::nullopt);

/// max |E(t) - E(0)| / max(1, |E(0)|). Needs at least two records.
double energy_drift(const std::vector<DiagnosticsRecord>& series);

/// CSV with a header row; every value printed with 17 significant digits.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const DiagnosticsRecord& rec);
std::vector<DiagnosticsRecord> read_csv(std::istream& in);

} // namespace nlshear

#endif

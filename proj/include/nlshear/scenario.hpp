// scenario.hpp
//
// Declarative run description, loaded from a single JSON document:
//
// {
//   "schema_version": 1,
//   "name": "g1",
//   "grid":       {"nx": 64, "ny": 64, "lx": 40, "ly": 40},
//   "kernel":     {"name": "bessel_k0"},
//   "energy":     {"name": "linear_plus", "G": {"name": "powerlaw", "a": 1, "q": 2}},
//   "initial":    {"phi": {"kind": "gaussian_bump", "amplitude": 0.1, "sigma": 2},
//                  "psi": {"kind": "zero"}},
//   "integrator": {"scheme": "rk4", "t_end": 10},
//   "operator":   {"dealias": true},
//   "levine":     {"nu": 0.5},
//   "checks":     {"k": 1, "nu": 0.5, "u_max": 100, "n_samples": 1000},
//   "output":     {"diagnostics_every": 1, "snapshot_every": 0, "sobolev_s": 1},
//   "strict": false
// }
//
// Unknown keys are errors. Every problem found is reported at once.

#ifndef NLSHEAR_SCENARIO_HPP
#define NLSHEAR_SCENARIO_HPP

#include "nlshear/integrator.hpp"
#include "nlshear/kernels.hpp"
#include "nlshear/nonlinearity.hpp"
#include "nlshear/nonlocal_operator.hpp"

#include "json.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nlshear {

inline constexpr int kSchemaVersion = 1;

struct GridSpec {
    int nx = 64;
    int ny = 64;
    double lx = 40.0;
    double ly = 40.0;
    bool operator==(const GridSpec&) const = default;
};

struct KernelSpec {
    std::string name = "bessel_k0"; // gaussian | bessel_k0 | bi_helmholtz | dirac | tabulated
    double c1 = 2.0;                // bi_helmholtz
    double c2 = 1.0;
    double effective_r = 10.0;      // gaussian
    std::string file;               // tabulated
    double r = 2.0;                 // tabulated
    double C = 1.0;
    bool operator==(const KernelSpec&) const = default;
};

struct EnergySpec {
    // powerlaw {a, q} | linear_plus {G} | anisotropic {builtin, of | sign}
    std::string name = "powerlaw";
    double a = 0.5;
    double q = 1.0;
    std::string builtin;         // isotropic_reduction | quartic | p2q
    double sign = 1.0;           // quartic
    std::vector<EnergySpec> inner; // G of linear_plus, or `of` of isotropic_reduction
    bool operator==(const EnergySpec&) const = default;
};

struct InitialSpec {
    // zero | gaussian_bump | mode | ring | file | proportional (psi only)
    std::string kind = "zero";
    double amplitude = 0.0;
    double sigma = 1.0;
    std::array<double, 2> center{0.0, 0.0};
    std::array<int, 2> index{1, 0};
    double radius = 1.0;
    double width = 1.0;
    std::string path;
    double factor = 0.0;
    bool operator==(const InitialSpec&) const = default;
};

struct IntegratorSpec {
    std::string scheme = "rk4";
    std::optional<double> dt; // auto when absent
    double t_end = 1.0;
    long max_steps = 10'000'000;
    double sup_grad_factor = 1e6;
    std::optional<double> sup_grad_limit;
    double field_limit = 1e100;
    int max_halvings = 0;
    bool operator==(const IntegratorSpec&) const = default;
};

struct OperatorSpec {
    bool dealias = true;
    double epsilon_floor = 1e-280;
    std::string floor_mode = "skip";
    double imag_tolerance = 1e-10;
    bool operator==(const OperatorSpec&) const = default;
};

struct LevineSpec {
    double nu = 0.5;
    std::optional<double> b;
    std::optional<double> t0;
    bool operator==(const LevineSpec&) const = default;
};

struct ChecksSpec {
    std::optional<double> k;
    std::optional<double> nu;
    double u_max = 100.0;
    int n_samples = 1000;
    bool operator==(const ChecksSpec&) const = default;
};

struct OutputSpec {
    long diagnostics_every = 1;
    long snapshot_every = 0; // 0 disables
    double sobolev_s = 1.0;
    bool operator==(const OutputSpec&) const = default;
};

struct Scenario {
    int schema_version = kSchemaVersion;
    std::string name = "scenario";
    GridSpec grid;
    KernelSpec kernel;
    EnergySpec energy;
    InitialSpec phi;
    InitialSpec psi;
    IntegratorSpec integrator;
    OperatorSpec op;
    std::optional<LevineSpec> levine;
    ChecksSpec checks;
    OutputSpec output;
    bool strict = false;
    /// Directory used to resolve relative paths (kernel files, initial data).
    std::filesystem::path base_dir;

    bool operator==(const Scenario& o) const;
};

/// Parses and validates; throws ConfigError listing every problem.
Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
/// Full effective document (defaults filled in).
nlohmann::ordered_json scenario_to_json(const Scenario& s);

/// Applies `path=value` overrides (dotted paths; values parsed as JSON when
/// possible, else taken as strings).
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides);

nlohmann::json read_json_file(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

Grid2D make_grid(const Scenario& s);
KernelSymbol make_kernel(const KernelSpec& spec, const Grid2D& grid, const std::filesystem::path& base_dir = {});
Energy make_energy(const EnergySpec& spec);
IsotropicEnergy make_isotropic_energy(const EnergySpec& spec);
OperatorOptions make_operator_options(const Scenario& s);
OperatorContext make_context(const Scenario& s);
Scheme parse_scheme(const std::string& name);

/// Reference scenarios "g1" (global existence) and "b1" (blow-up) as JSON
/// documents. Throws ConfigError for other names.
nlohmann::json builtin_scenario_json(const std::string& name);
Scenario builtin_scenario(const std::string& name);

struct InitialState {
    SimState state;
    double boundary_max = 0.0;   // max |phi|, |psi| on the outer ring
    double amplitude_max = 0.0;  // max |phi|, |psi| overall
    std::vector<std::string> warnings;
};

inline constexpr double kBoundaryDecay = 1e-12;

/// Realizes phi and psi on the grid. Non-periodic data whose outer ring
/// exceeds 1e-12 of the peak amplitude produces a warning, or a ConfigError
/// in strict mode.
InitialState build_initial_state(const Scenario& s, const Grid2D& grid);

} // namespace nlshear

#endif

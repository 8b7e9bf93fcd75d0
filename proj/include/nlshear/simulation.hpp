// simulation.hpp
//
// One scenario, start to finish: build the operator and initial data, freeze
// E(0) and the Levine constants, integrate, and collect diagnostics.
//
// Output directory layout (when one is given):
//   manifest.json         effective scenario plus every auto-chosen value
//   diagnostics.csv       one row per cadence step, final state always included
//   snapshots/NNNNNN.raw  displacement w at the snapshot cadence and the final state (+ .json sidecar)
//   report.json           outcome, t*, t1, drift, Levine values, condition checks

#ifndef NLSHEAR_SIMULATION_HPP
#define NLSHEAR_SIMULATION_HPP

#include "nlshear/diagnostics.hpp"
#include "nlshear/kernels.hpp"
#include "nlshear/nonlinearity.hpp"
#include "nlshear/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace nlshear {

/// 0 completed, 3 sup-gradient halt, 4 any other halt.
int exit_code_for(RunStatus status);

struct RunResult {
    Scenario scenario;
    double dt = 0.0;
    bool dt_auto = false;
    double omega_max = 0.0;
    double E0 = 0.0;
    double pairing0 = 0.0; // <R phi, R psi>
    LevineConfig levine;
    LevineValues levine0;
    std::optional<double> t1; // H(0) / (nu H'(0)) when both are positive
    RunOutcome outcome;
    int exit_code = 0;
    std::vector<DiagnosticsRecord> series;
    double energy_drift = 0.0;
    /// min over records of (H'' H - (1+nu) H'^2) / H^2; the second restricts to
    /// records with sup_grad <= 10x its initial value.
    double min_normalized_residual = 0.0;
    double min_normalized_residual_resolved = 0.0;
    DecayReport decay;
    std::vector<ConditionReport> checks;
    std::vector<std::string> warnings;
    std::optional<SimState> final_state;
    nlohmann::ordered_json manifest;
    nlohmann::ordered_json report;
};

/// Runs the scenario. With an output directory the files above are written
/// (the directory is created; existing files are overwritten).
RunResult run_scenario(const Scenario& s, const std::optional<std::filesystem::path>& out_dir = std::nullopt);

nlohmann::ordered_json to_json(const ConditionReport& r);
nlohmann::ordered_json to_json(const DecayReport& r);
nlohmann::ordered_json to_json(const RunOutcome& r);

} // namespace nlshear

#endif

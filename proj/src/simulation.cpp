#include "nlshear/simulation.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/snapshot.hpp"
#include "nlshear/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace nlshear {

using nlohmann::ordered_json;

int exit_code_for(RunStatus status) {
    switch (status) {
    case RunStatus::completed:
        return 0;
    case RunStatus::sup_gradient_exceeded:
        return 3;
    default:
        return 4;
    }
}

ordered_json to_json(const ConditionReport& r) {
    ordered_json j{{"condition", r.condition},   {"parameter", r.parameter}, {"sample_min", r.sample_min},
                   {"sample_max", r.sample_max}, {"n_samples", r.n_samples}, {"extreme", r.extreme},
                   {"tolerance", r.tolerance},   {"pass", r.pass}};
    j["closed_form"] = r.closed_form ? ordered_json(*r.closed_form) : ordered_json(nullptr);
    return j;
}

ordered_json to_json(const DecayReport& r) {
    return {{"kernel", r.kernel},
            {"r", std::isfinite(r.r) ? ordered_json(r.r) : ordered_json("inf")},
            {"C", r.C},
            {"min_symbol", r.min_symbol},
            {"empirical_C", r.empirical_C},
            {"nonnegative", r.nonnegative},
            {"bounded", r.bounded},
            {"in_decay_class", r.in_decay_class},
            {"pass", r.pass()}};
}

ordered_json to_json(const RunOutcome& r) {
    return {{"status", to_string(r.status)},
            {"t_final", r.t_final},
            {"steps", r.steps},
            {"halvings", r.halvings},
            {"sup_grad_initial", r.sup_grad_initial},
            {"sup_grad_limit", r.sup_grad_limit},
            {"sup_grad_final", r.sup_grad_final},
            {"message", r.message}};
}

namespace {

std::vector<ConditionReport> condition_checks(const Scenario& s, const Energy& e) {
    std::vector<ConditionReport> out;
    const int n = s.checks.n_samples;
    if (const auto* iso = std::get_if<IsotropicEnergy>(&e)) {
        if (s.checks.k) out.push_back(check_global_condition(*iso, *s.checks.k, s.checks.u_max, n));
        if (s.checks.nu) out.push_back(check_blowup_condition(*iso, *s.checks.nu, s.checks.u_max, n));
    } else {
        const auto& an = std::get<AnisotropicEnergy>(e);
        const double radius = std::sqrt(s.checks.u_max);
        if (s.checks.k) out.push_back(check_global_condition(an, *s.checks.k, radius, n));
        if (s.checks.nu) out.push_back(check_blowup_condition(an, *s.checks.nu, radius, n));
    }
    return out;
}

ordered_json levine_json(const LevineConfig& c, const LevineValues& v) {
    return {{"nu", c.nu},           {"b", c.b},
            {"t0", c.t0},           {"b_auto", c.b_auto},
            {"t0_auto", c.t0_auto}, {"t0_raised", c.t0_raised},
            {"admissible", c.admissible}, {"H0", v.H},
            {"Hprime0", v.Hprime},  {"Hdoubleprime0", v.Hdoubleprime}};
}

std::string snapshot_stem(long step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06ld", step);
    return buf;
}

} // namespace

RunResult run_scenario(const Scenario& s, const std::optional<std::filesystem::path>& out_dir) {
    RunResult res;
    res.scenario = s;

    const OperatorContext ctx = make_context(s);
    const Grid2D& grid = ctx.grid();
    InitialState init = build_initial_state(s, grid);
    res.warnings = init.warnings;

    res.decay = validate_decay(ctx.kernel(), grid);
    if (!res.decay.pass())
        res.warnings.push_back("kernel " + res.decay.kernel + " does not pass the decay check on this grid");

    res.omega_max = max_linear_frequency(ctx.kernel(), grid);
    res.dt_auto = !s.integrator.dt.has_value();
    res.dt = s.integrator.dt ? *s.integrator.dt : default_time_step(ctx.kernel(), grid);
    res.dt = std::min(res.dt, s.integrator.t_end);

    const SimState& s0 = init.state;
    res.E0 = energy(ctx, s0);
    res.pairing0 = R_inner_product(ctx, s0.w, s0.v);
    const double nu = s.levine ? s.levine->nu : 0.5;
    try {
        res.levine = LevineConfig::make(nu, res.E0, res.pairing0, s.levine ? s.levine->b : std::nullopt,
                                        s.levine ? s.levine->t0 : std::nullopt);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!res.levine.admissible)
        res.warnings.push_back("E(0) >= 0: Levine constants are diagnostic only");
    res.levine0 = levine_H(ctx, s0, res.levine);
    if (res.levine0.H > 0.0 && res.levine0.Hprime > 0.0)
        res.t1 = levine_bound(res.levine, res.levine0.H, res.levine0.Hprime);

    res.checks = condition_checks(s, ctx.energy());

    StepControl control;
    control.dt = res.dt;
    control.t_end = s.integrator.t_end;
    control.scheme = parse_scheme(s.integrator.scheme);
    control.max_steps = s.integrator.max_steps;
    control.sup_grad_factor = s.integrator.sup_grad_factor;
    control.sup_grad_limit = s.integrator.sup_grad_limit;
    control.field_limit = s.integrator.field_limit;
    control.max_halvings = s.integrator.max_halvings;
    control.validate();

    ordered_json manifest;
    manifest["scenario"] = scenario_to_json(s);
    manifest["effective"] = {{"dt", res.dt},
                             {"dt_auto", res.dt_auto},
                             {"omega_max", res.omega_max},
                             {"E0", res.E0},
                             {"pairing0", res.pairing0},
                             {"levine", levine_json(res.levine, res.levine0)},
                             {"t1", res.t1 ? ordered_json(*res.t1) : ordered_json(nullptr)},
                             {"boundary_max", init.boundary_max},
                             {"amplitude_max", init.amplitude_max}};
    manifest["kernel_decay"] = to_json(res.decay);
    manifest["warnings"] = res.warnings;
    res.manifest = manifest;

    std::ofstream csv;
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        if (s.output.snapshot_every > 0) std::filesystem::create_directories(*out_dir / "snapshots");
        std::ofstream m(*out_dir / "manifest.json");
        if (!m) throw std::runtime_error("cannot write " + (*out_dir / "manifest.json").string());
        m << manifest.dump(2) << '\n';
        csv.open(*out_dir / "diagnostics.csv");
        if (!csv) throw std::runtime_error("cannot write " + (*out_dir / "diagnostics.csv").string());
        write_csv_header(csv);
    }

    long last_recorded = -1;
    auto emit = [&](const SimState& st, double sup_grad) {
        if (st.step_index == last_recorded) return;
        last_recorded = st.step_index;
        DiagnosticsRecord rec = record(ctx, st, res.levine, s.output.sobolev_s, sup_grad);
        if (csv.is_open()) write_csv_row(csv, rec);
        res.series.push_back(rec);
    };
    std::vector<Observer> observers;
    observers.push_back([&](const SimState& st, const StepInfo& info) {
        if (st.step_index % s.output.diagnostics_every == 0) emit(st, info.sup_grad);
        if (out_dir && s.output.snapshot_every > 0 && st.step_index % s.output.snapshot_every == 0)
            write_snapshot(*out_dir / "snapshots" / snapshot_stem(st.step_index), st.w, st.t, "w");
    });

    SimState final_state(init.state);
    res.outcome = run(ctx, init.state, control, observers, &final_state);
    if (final_state.all_finite()) {
        emit(final_state, sup_norm_gradient(final_state.w));
        if (out_dir && s.output.snapshot_every > 0 && final_state.step_index % s.output.snapshot_every != 0)
            write_snapshot(*out_dir / "snapshots" / snapshot_stem(final_state.step_index), final_state.w,
                           final_state.t, "w");
    }
    res.final_state = final_state;
    res.exit_code = exit_code_for(res.outcome.status);

    res.energy_drift = res.series.size() >= 2 ? energy_drift(res.series) : 0.0;
    double min_all = std::numeric_limits<double>::infinity();
    double min_resolved = min_all;
    double reference = res.outcome.sup_grad_initial;
    if (reference == 0.0) reference = sup_norm_gradient(s0.v);
    const double resolved_limit = reference > 0.0 ? 10.0 * reference : std::numeric_limits<double>::infinity();
    for (const auto& r : res.series) {
        const double q = r.concavity_residual / (r.H * r.H);
        min_all = std::min(min_all, q);
        if (r.sup_grad <= resolved_limit) min_resolved = std::min(min_resolved, q);
    }
    res.min_normalized_residual = min_all;
    res.min_normalized_residual_resolved = min_resolved;

    ordered_json report;
    report["name"] = s.name;
    report["outcome"] = to_json(res.outcome);
    report["exit_code"] = res.exit_code;
    report["t_star"] = res.outcome.status == RunStatus::sup_gradient_exceeded ? ordered_json(res.outcome.t_final)
                                                                              : ordered_json(nullptr);
    report["t1"] = res.t1 ? ordered_json(*res.t1) : ordered_json(nullptr);
    report["E0"] = res.E0;
    report["energy_drift"] = res.energy_drift;
    report["levine"] = levine_json(res.levine, res.levine0);
    report["min_normalized_concavity_residual"] = min_all;
    report["min_normalized_concavity_residual_resolved"] = min_resolved;
    report["records"] = res.series.size();
    ordered_json checks = ordered_json::array();
    for (const auto& c : res.checks) checks.push_back(to_json(c));
    report["condition_checks"] = checks;
    report["kernel_decay"] = to_json(res.decay);
    report["warnings"] = res.warnings;
    res.report = report;

    if (out_dir) {
        std::ofstream r(*out_dir / "report.json");
        if (!r) throw std::runtime_error("cannot write " + (*out_dir / "report.json").string());
        r << report.dump(2) << '\n';
    }
    return res;
}

} // namespace nlshear

// nonlocal-shear: run, sweep, validate and summarize anti-plane shear runs.

#include "nlshear/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral simulator for nonlocal anti-plane shear waves"};
    app.require_subcommand(1);

    nlshear::CommandOptions opts;
    std::string output_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--set", opts.overrides, "Override a scenario value, e.g. --set integrator.t_end=5");
        sub->add_flag("--strict", opts.strict, "Turn boundary and floor warnings into errors");
        sub->add_option("--output-dir,-o", output_dir, "Output directory");
    };

    std::string scenario, sweep_file, suite, report_dir;

    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("scenario", scenario, "Scenario JSON file")->required();
    add_common(run);

    auto* sweep = app.add_subcommand("sweep", "Run the Cartesian product of a parameter sweep");
    sweep->add_option("scenario", scenario, "Base scenario JSON file")->required();
    sweep->add_option("sweep", sweep_file, "Sweep JSON file: {\"parameters\": {path: [values]}}")->required();
    sweep->add_option("--jobs,-j", opts.jobs, "Concurrent runs (capped by NONLOCAL_SHEAR_THREADS)")
        ->check(CLI::PositiveNumber);
    add_common(sweep);

    auto* validate = app.add_subcommand("validate", "Run a fixed validation suite");
    validate->add_option("what", suite, "kernels | oracles | convergence")
        ->required()
        ->check(CLI::IsMember({"kernels", "oracles", "convergence"}));
    validate->add_option("--output-dir,-o", output_dir, "Directory for the CSV table");

    auto* report = app.add_subcommand("report", "Summarize a run or sweep directory");
    report->add_option("dir", report_dir, "Run or sweep output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : nlshear::kExitError;
    }
    if (!output_dir.empty()) opts.output_dir = output_dir;

    if (*run) return nlshear::cmd_run(scenario, opts, std::cout, std::cerr);
    if (*sweep) return nlshear::cmd_sweep(scenario, sweep_file, opts, std::cout, std::cerr);
    if (*validate) return nlshear::cmd_validate(suite, opts, std::cout, std::cerr);
    return nlshear::cmd_report(report_dir, std::cout, std::cerr);
}

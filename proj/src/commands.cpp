#include "nlshear/commands.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/scenario.hpp"
#include "nlshear/simulation.hpp"
#include "nlshear/validation.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace nlshear {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

json load_document(const std::filesystem::path& path, const CommandOptions& opts) {
    json doc = read_json_file(path);
    apply_overrides(doc, opts.overrides);
    if (opts.strict) doc["strict"] = true;
    return doc;
}

void print_summary(std::ostream& out, const RunResult& r, const std::filesystem::path& dir) {
    out << "scenario   " << r.scenario.name << '\n';
    out << "status     " << to_string(r.outcome.status) << " at t = " << short_fmt(r.outcome.t_final) << " after "
        << r.outcome.steps << " steps (dt = " << short_fmt(r.dt) << ")\n";
    out << "E(0)       " << short_fmt(r.E0) << ", drift " << short_fmt(r.energy_drift) << '\n';
    out << "Levine     b = " << short_fmt(r.levine.b) << ", t0 = " << short_fmt(r.levine.t0)
        << ", t1 = " << (r.t1 ? short_fmt(*r.t1) : std::string("n/a")) << '\n';
    for (const auto& c : r.checks)
        out << "check      " << c.condition << " (" << short_fmt(c.parameter) << "): " << (c.pass ? "pass" : "fail")
            << '\n';
    for (const auto& w : r.warnings) out << "warning    " << w << '\n';
    out << "output     " << dir.string() << '\n';
}

struct SweepRun {
    std::vector<json> values;
    std::string status = "error";
    int exit_code = kExitError;
    std::optional<double> t_star;
    std::optional<double> t1;
    std::optional<double> E0;
    std::optional<double> drift;
    std::string error;
};

std::string opt_fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

} // namespace

std::filesystem::path default_output_dir(const std::string& scenario_name) {
    return std::filesystem::path("out") / scenario_name;
}

int effective_jobs(int requested) {
    int jobs = std::max(1, requested);
    if (const char* env = std::getenv("NONLOCAL_SHEAR_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) jobs = std::min<long>(jobs, cap);
    }
    return jobs;
}

int cmd_run(const std::filesystem::path& scenario_path, const CommandOptions& opts, std::ostream& out,
            std::ostream& err) {
    try {
        const Scenario s = scenario_from_json(load_document(scenario_path, opts), scenario_path.parent_path());
        const auto dir = opts.output_dir ? *opts.output_dir : default_output_dir(s.name);
        const RunResult r = run_scenario(s, dir);
        print_summary(out, r, dir);
        return r.exit_code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_sweep(const std::filesystem::path& scenario_path, const std::filesystem::path& sweep_path,
              const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    json base;
    std::vector<std::string> paths;
    std::vector<std::vector<json>> lists;
    try {
        base = load_document(scenario_path, opts);
        std::ifstream in(sweep_path);
        if (!in) throw ConfigError("cannot open " + sweep_path.string());
        ordered_json spec = ordered_json::parse(in);
        if (!spec.is_object() || !spec.contains("parameters") || !spec["parameters"].is_object())
            throw ConfigError(sweep_path.string() + ": expected {\"parameters\": {path: [values]}}");
        for (const auto& [k, v] : spec.items())
            if (k != "parameters") throw ConfigError(sweep_path.string() + ": unknown key " + k);
        for (const auto& [path, values] : spec["parameters"].items()) {
            if (!values.is_array() || values.empty())
                throw ConfigError(sweep_path.string() + ": " + path + " needs a non-empty list of values");
            paths.push_back(path);
            std::vector<json> vs;
            for (const auto& v : values) vs.push_back(json::parse(v.dump()));
            lists.push_back(std::move(vs));
        }
        if (paths.empty()) throw ConfigError(sweep_path.string() + ": no parameters");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    std::vector<SweepRun> runs(1);
    for (const auto& list : lists) {
        std::vector<SweepRun> next;
        for (const auto& r : runs)
            for (const auto& v : list) {
                SweepRun n = r;
                n.values.push_back(v);
                next.push_back(std::move(n));
            }
        runs = std::move(next);
    }

    const std::string name = base.contains("name") && base["name"].is_string() ? base["name"].get<std::string>()
                                                                               : std::string("sweep");
    const auto root = opts.output_dir ? *opts.output_dir : default_output_dir(name + "_sweep");
    try {
        std::filesystem::create_directories(root);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            SweepRun& run = runs[i];
            char dirname[32];
            std::snprintf(dirname, sizeof dirname, "run_%04zu", i);
            try {
                json doc = base;
                std::vector<std::string> sets;
                for (std::size_t p = 0; p < paths.size(); ++p) sets.push_back(paths[p] + "=" + run.values[p].dump());
                apply_overrides(doc, sets);
                const Scenario s = scenario_from_json(doc, scenario_path.parent_path());
                const RunResult r = run_scenario(s, root / dirname);
                run.status = to_string(r.outcome.status);
                run.exit_code = r.exit_code;
                if (r.outcome.status == RunStatus::sup_gradient_exceeded) run.t_star = r.outcome.t_final;
                run.t1 = r.t1;
                run.E0 = r.E0;
                run.drift = r.energy_drift;
            } catch (const std::exception& e) {
                run.error = e.what();
            }
            std::lock_guard<std::mutex> lock(log_mutex);
            out << dirname << "  " << run.status;
            if (!run.error.empty()) out << "  " << run.error.substr(0, run.error.find('\n'));
            out << '\n';
        }
    };
    const int jobs = std::min<int>(effective_jobs(opts.jobs), static_cast<int>(runs.size()));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ofstream csv(root / "summary.csv");
    csv << "run";
    for (const auto& p : paths) csv << ',' << csv_quote(p);
    csv << ",status,exit_code,t_star,t1,E0,energy_drift,error\n";
    bool any_error = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        any_error = any_error || !r.error.empty();
        char id[16];
        std::snprintf(id, sizeof id, "%04zu", i);
        csv << id;
        for (const auto& v : r.values) csv << ',' << csv_quote(v.is_string() ? v.get<std::string>() : v.dump());
        csv << ',' << r.status << ',' << r.exit_code << ',' << opt_fmt(r.t_star) << ',' << opt_fmt(r.t1) << ','
            << opt_fmt(r.E0) << ',' << opt_fmt(r.drift) << ',' << csv_quote(r.error) << '\n';
    }
    out << runs.size() << " runs, summary in " << (root / "summary.csv").string() << '\n';
    return any_error ? kExitError : kExitOk;
}

int cmd_validate(const std::string& what, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    std::vector<ValidationRow> rows;
    try {
        rows = run_validation(what);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    print_validation_table(out, rows);
    const auto dir = opts.output_dir ? *opts.output_dir : std::filesystem::path("out");
    try {
        std::filesystem::create_directories(dir);
        std::ofstream csv(dir / ("validate_" + what + ".csv"));
        write_validation_csv(csv, rows);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    const auto failed = std::count_if(rows.begin(), rows.end(), [](const ValidationRow& r) { return !r.pass; });
    out << rows.size() - static_cast<std::size_t>(failed) << "/" << rows.size() << " checks passed\n";
    if (failed) {
        err << failed << " validation check(s) failed:\n";
        for (const auto& r : rows)
            if (!r.pass) err << "  " << r.name << '\n';
    }
    return failed ? kExitError : kExitOk;
}

int cmd_report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
    try {
        if (std::filesystem::exists(dir / "report.json")) {
            const json r = read_json_file(dir / "report.json");
            auto num = [](const json& v) { return v.is_number() ? short_fmt(v.get<double>()) : std::string("n/a"); };
            out << "scenario   " << r.value("name", "") << '\n';
            out << "status     " << r["outcome"]["status"].get<std::string>() << " at t = "
                << num(r["outcome"]["t_final"]) << " (exit " << r["exit_code"].get<int>() << ")\n";
            out << "t*         " << num(r["t_star"]) << "   t1 " << num(r["t1"]) << '\n';
            out << "E(0)       " << num(r["E0"]) << "   drift " << num(r["energy_drift"]) << '\n';
            out << "residual   min normalized concavity residual (resolved) "
                << num(r["min_normalized_concavity_residual_resolved"]) << '\n';
            for (const auto& c : r["condition_checks"])
                out << "check      " << c["condition"].get<std::string>() << " (" << num(c["parameter"])
                    << "): " << (c["pass"].get<bool>() ? "pass" : "fail") << '\n';
            for (const auto& w : r["warnings"]) out << "warning    " << w.get<std::string>() << '\n';
            return kExitOk;
        }
        if (std::filesystem::exists(dir / "summary.csv")) {
            std::ifstream in(dir / "summary.csv");
            std::string line;
            while (std::getline(in, line)) out << line << '\n';
            return kExitOk;
        }
        err << "error: " << dir.string() << " holds neither report.json nor summary.csv\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

} // namespace nlshear

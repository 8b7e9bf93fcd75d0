// commands.hpp
//
// The subcommands behind the nonlocal-shear binary. Each returns the process
// exit code: 0 success, 1 error, 3 halted on the sup-gradient detector,
// 4 halted for another reason (non-finite values, field bound, step budget).

#ifndef NLSHEAR_COMMANDS_HPP
#define NLSHEAR_COMMANDS_HPP

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nlshear {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitHalted = 4;

struct CommandOptions {
    std::vector<std::string> overrides; // --set path=value
    std::optional<std::filesystem::path> output_dir;
    bool strict = false;
    int jobs = 1;
};

/// Output directory used when none is given: out/<scenario name>.
std::filesystem::path default_output_dir(const std::string& scenario_name);

int cmd_run(const std::filesystem::path& scenario_path, const CommandOptions& opts, std::ostream& out,
            std::ostream& err);

/// sweep file: {"parameters": {"initial.phi.amplitude": [0.5, 1.0], "energy.q": [1, 2]}}
/// Runs the Cartesian product (last parameter fastest) into run_NNNN/ and
/// writes summary.csv. Returns 0 when every run finished without error.
int cmd_sweep(const std::filesystem::path& scenario_path, const std::filesystem::path& sweep_path,
              const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// what: kernels | oracles | convergence. Writes validate_<what>.csv.
int cmd_validate(const std::string& what, const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Summarizes a run directory (report.json) or a sweep directory (summary.csv).
int cmd_report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

/// Worker count: requested, capped by NONLOCAL_SHEAR_THREADS when set, at least 1.
int effective_jobs(int requested);

} // namespace nlshear

#endif

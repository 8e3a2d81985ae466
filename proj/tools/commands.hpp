#pragma once

#include "config.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace aafix::cli {

/// 0 pass, 1 error, 2 certified fail.
enum ExitCode : int { exit_pass = 0, exit_error = 1, exit_fail = 2 };

struct CommandOptions {
    std::string out_dir = ".";
    bool allow_uncertified = false;
    std::optional<double> tol;
    std::string path;                    // diagnose input CSV
};

int cmd_certify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_solve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_diagnose(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_demo(const std::string& name, const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);

/// Text of the diagnostics selected in cfg, run on p.
std::string diagnose_text(const RunConfig& cfg, const SampledPath& p);

void write_solver_report(std::ostream& out, const SolverReport& r);

/// Parses argv and dispatches; every error becomes exit code 1.
int run_cli(int argc, char** argv, std::ostream& log, std::ostream& err);

}  // namespace aafix::cli

#pragma once

// INI run configuration: problem, numerics, certify/solve/diagnose settings
// and the demo parameter blocks. Unknown sections and keys are rejected.

#include "aafix/certifier.hpp"
#include "aafix/demos.hpp"
#include "aafix/problem.hpp"
#include "aafix/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aafix::cli {

struct DiagnoseSettings {
    std::string test = "all";            // bochner | range | aaa | bohr_neugebauer | all
    DomainKind domain = DomainKind::full_line;
    std::vector<double> shifts;          // explicit list; empty: period * n, n = 1..count
    double shift_period = 6.283185307179586;
    int shift_count = 40;
    double probe_min = -10.0;
    double probe_max = 10.0;
    int probe_count = 9;
    double tol = 0.05;
    double eps = 0.01;
    std::vector<double> windows{50.0, 100.0};
    double split_time = 10.0;

    [[nodiscard]] std::vector<double> probes() const;
    /// Explicit shifts, or as many multiples of the period as fit in [lo, hi].
    [[nodiscard]] std::vector<double> shift_list(double t_max) const;
};

struct RunConfig {
    std::optional<ProblemSpec> spec;     // absent when the file has no [problem]
    CertifyOptions certify;
    SolverOptions solve;
    DiagnoseSettings diagnose;
    HeatDemoParams heat;
    DelayDemoParams delay;
    std::string out_dir;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& file);

/// Number with an optional "pi" suffix ("pi", "2pi", "0.5pi").
double parse_number(const std::string& text);
std::vector<double> parse_list(const std::string& text);

}  // namespace aafix::cli

#pragma once

// Both sides of the Bohr-Neugebauer equivalence on a computed solution:
// relatively compact range versus the Bochner double-limit test.

#include "aafix/certifier.hpp"
#include "aafix/diagnostics.hpp"
#include "aafix/problem.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace aafix {

struct BNOptions {
    double eps = 0.01;
    std::vector<double> windows{50.0, 100.0};
    std::vector<double> shifts;                 // empty: 2 pi n while the probes stay in the window
    std::vector<double> probe_grid;             // empty: 9 points on [-10, 10]
    double tol = 0.05;
    bool compute_residual = true;
};

struct BohrNeugebauerReport {
    BNHypothesisReport hypotheses;
    DiagnosticReport compactness;
    DiagnosticReport bochner;
    std::optional<double> residual;             // |Gamma p - p| on the spec grid
    bool agree = false;                         // both sides reach the same verdict
    std::string equation;                       // "two-kernel" or "delayed-only"
    std::vector<std::string> notes;
};

/// Throws CertificationError when the hypotheses fail.
BohrNeugebauerReport bohr_neugebauer_verdict(const ProblemSpec& spec, const SampledPath& p, const BNOptions& opt = {});

void write_report(std::ostream& out, const BohrNeugebauerReport& r);

}  // namespace aafix

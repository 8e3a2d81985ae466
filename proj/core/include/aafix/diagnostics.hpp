#pragma once

// Heuristic almost-automorphy diagnostics on sampled paths and evolution
// families. Verdicts mean "consistent at the tested resolution", never a proof.

#include "aafix/evolution.hpp"
#include "aafix/function_space.hpp"
#include "aafix/kernels.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace aafix {

enum class DiagVerdict { consistent, inconsistent, indeterminate };
std::string to_string(DiagVerdict v);

struct DiagnosticReport {
    std::string test;
    bool heuristic = true;
    DiagVerdict verdict = DiagVerdict::indeterminate;
    double tol = 0.0;
    std::vector<double> shifts;                 // shifts that could be applied
    std::vector<std::size_t> cluster_sizes;     // accepted shifts at each ladder depth
    std::vector<std::size_t> subsequence;       // indices into shifts, final depth
    std::vector<double> forward_residuals;      // |p(t + s_n) - f~(t)| on the probes
    std::vector<double> backward_residuals;     // |f~(t - s_n) - p(t)| on the probes
    std::vector<double> windows;
    std::vector<std::size_t> net_sizes;
    std::string evidence;
    std::vector<std::string> notes;
};

/// Greedy Cauchy filtering of probe vectors at tol, tol/2 and tol/4, then the
/// forward and backward limits along the extracted subsequence. The limit
/// f~ is the mean over the last quartile of accepted shifts.
DiagnosticReport bochner_test(const SampledPath& p, const std::vector<double>& shifts,
                              const std::vector<double>& probe_grid, double tol);

/// epsilon-net sizes of p restricted to each window [-W, W] (or [0, W] on
/// the half line); consistent when the last two sizes agree.
DiagnosticReport range_compactness_trend(const SampledPath& p, double eps, const std::vector<double>& windows);

struct AAASplitEstimate {
    AAADecomposition decomposition;
    double residual = 0.0;        // sup of the ergodic part beyond split_time
    double split_time = 0.0;
    double recurrence = 0.0;      // near-period used for the tail extension
    double recurrence_defect = 0.0;
    std::string note;
};

/// Principal part by tail extension along a near-period found on
/// [split_time, end]; ergodic = p - principal.
AAASplitEstimate aaa_split_estimate(const SampledPath& p, double split_time);

/// Bochner-type test of (t,s) -> U(t,s)x along diagonal shifts, over the
/// plan's (t,s) pairs and the coordinate vectors.
DiagnosticReport check_bi_aa_family(const EvolutionFamily& fam, const std::vector<double>& shifts,
                                    const SamplePlan& plan, double tol = 1e-6);

void write_report(std::ostream& out, const DiagnosticReport& r);
/// CSV `index,shift,forward,backward` over the extracted subsequence.
void write_residual_csv(std::ostream& out, const DiagnosticReport& r);

}  // namespace aafix

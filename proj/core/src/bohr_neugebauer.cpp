#include "aafix/bohr_neugebauer.hpp"

#include "aafix/operators.hpp"
#include "aafix/path_csv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace aafix {

BohrNeugebauerReport bohr_neugebauer_verdict(const ProblemSpec& spec, const SampledPath& p, const BNOptions& opt) {
    BohrNeugebauerReport r;
    r.hypotheses = certify_bohr_neugebauer_hypotheses(spec);
    if (!r.hypotheses.pass)
        throw CertificationError("Bohr-Neugebauer hypotheses not certified: " + r.hypotheses.note);
    r.equation = r.hypotheses.two_kernel ? "two-kernel" : "delayed-only";

    std::vector<double> probes = opt.probe_grid.empty() ? linspace(-10.0, 10.0, 9) : opt.probe_grid;
    std::vector<double> shifts = opt.shifts;
    if (shifts.empty()) {
        const double hi = *std::max_element(probes.begin(), probes.end());
        for (int n = 1; hi + 2.0 * std::numbers::pi * n <= p.t_max(); ++n) shifts.push_back(2.0 * std::numbers::pi * n);
        if (shifts.empty()) throw DomainError("bohr_neugebauer_verdict: window too short for the default shifts");
    }
    r.compactness = range_compactness_trend(p, opt.eps, opt.windows);
    r.bochner = bochner_test(p, shifts, probes, opt.tol);
    r.agree = r.compactness.verdict == r.bochner.verdict;
    if (opt.compute_residual) {
        try {
            r.residual = residual(spec, p);
        } catch (const DomainError& e) {
            r.notes.push_back(std::string("residual not evaluated: ") + e.what());
        }
    }
    if (r.residual && *r.residual > 1e-4)
        r.notes.push_back("residual " + format_double(*r.residual) + " is large: p is not a solution of this problem");
    r.notes.push_back("the equivalence is stated for the single-kernel equation but argued for the two-kernel one; "
                      "this verdict treats the " + r.equation + " form");
    r.notes.push_back("heuristic: both sides are finite-resolution proxies");
    return r;
}

void write_report(std::ostream& out, const BohrNeugebauerReport& r) {
    out << "test: bohr_neugebauer\n";
    out << "equation: " << r.equation << '\n';
    out << "hypotheses.rho: " << format_double(r.hypotheses.rho) << '\n';
    out << "hypotheses.L_f: " << format_double(r.hypotheses.L_f) << '\n';
    out << "hypotheses.pass: " << (r.hypotheses.pass ? "yes" : "no") << '\n';
    out << "compactness: " << to_string(r.compactness.verdict) << " (" << r.compactness.evidence << ")\n";
    out << "bochner: " << to_string(r.bochner.verdict) << " (" << r.bochner.evidence << ")\n";
    out << "agree: " << (r.agree ? "yes" : "no") << '\n';
    if (r.residual) out << "residual: " << format_double(*r.residual) << '\n';
    for (const auto& n : r.notes) out << "note: " << n << '\n';
}

}  // namespace aafix

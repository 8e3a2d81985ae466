// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.

#include "aafix/bohr_neugebauer.hpp"
#include "aafix/certifier.hpp"
#include "aafix/demos.hpp"
#include "aafix/diagnostics.hpp"
#include "aafix/evolution.hpp"
#include "aafix/operators.hpp"
#include "aafix/resolvent.hpp"
#include "aafix/solver.hpp"

#include "oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>

using namespace aafix;
using namespace aafix::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome zero_forcing() {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec s = zero_spec();
    const auto cert = certify(s);
    const auto rep = picard_solve(s, cert);
    const double norm = sup_norm(rep.solution);
    const double elapsed = seconds_since(t0);
    return {cert.passed() && norm <= 1e-12 && rep.iterations <= 2 && elapsed < 1.0,
            fmt("|y| = %.3g, %d iterations, %.2f s", norm, rep.iterations, elapsed)};
}

Outcome convolution_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec s = sinusoid_oracle_spec();
    const auto cert = certify(s);
    SolverOptions opt;
    opt.tol = 1e-10;
    const auto rep = picard_solve(s, cert, opt);
    const auto [A, B] = delayed_sinusoid_coefficients(0.25, 2.0);
    const bool coeffs = std::abs(A - 72.0 / 65.0) < 1e-14 && std::abs(B + 4.0 / 65.0) < 1e-14;
    const double err = max_error(rep.solution, [&](double t) { return A * std::sin(t) + B * std::cos(t); }, -20, 20);
    const double elapsed = seconds_since(t0);
    return {cert.passed() && coeffs && err <= 1e-6 && elapsed < 10.0,
            fmt("sup error %.3g on [-20, 20], %.2f s", err, elapsed)};
}

Outcome contraction_rate() {
    const ProblemSpec s = sinusoid_oracle_spec();
    const auto cert = certify(s);
    SolverOptions opt;
    opt.tol = 1e-10;
    opt.keep_iterates = true;
    const auto rep = picard_solve(s, cert, opt);
    SolverOptions tight;
    tight.tol = 1e-14;
    const SampledPath star = picard_solve(s, cert, tight).solution;

    const double L = cert.contraction;
    double worst_rate = 0.0;
    for (double r : rep.measured_rates) worst_rate = std::max(worst_rate, r);
    const double step1 = sup_distance(rep.iterates.at(1), rep.iterates.at(0));
    double worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < rep.iterates.size(); ++n) {
        const double bound = std::pow(L, static_cast<double>(n)) / (1.0 - L) * step1;
        const double err = sup_distance(rep.iterates[n], star);
        // the reference is itself within 1e-14 of the discrete fixed point
        worst_margin = std::min(worst_margin, bound + 1e-14 - err);
    }
    return {worst_rate <= L + 0.01 && worst_margin >= 0.0,
            fmt("L = %.4g, max rate %.4g, min a-priori margin %.3g over %zu iterates", L, worst_rate, worst_margin,
                rep.iterates.size())};
}

Outcome uniqueness() {
    const ProblemSpec s = sinusoid_oracle_spec();
    const auto cert = certify(s);
    SolverOptions opt;
    opt.tol = 1e-10;
    const auto a = picard_solve(s, cert, opt);
    const SampledPath& y0 = cert.base_point;
    Mat shifted = y0.values();
    for (Eigen::Index j = 0; j < shifted.cols(); ++j)
        shifted(0, j) += 0.5 * cert.rho * std::cos(0.37 * y0.grid()[static_cast<std::size_t>(j)]);
    opt.start = y0.with_values(shifted);
    const auto b = picard_solve(s, cert, opt);
    const double d = sup_distance(a.solution, b.solution);
    return {d <= 1e-8, fmt("rho = %.4g, distance between limits %.3g", cert.rho, d)};
}

Outcome advanced_mirror() {
    const ProblemSpec s = advanced_oracle_spec();
    const auto cert = certify(s);
    SolverOptions opt;
    opt.tol = 1e-10;
    const auto rep = picard_solve(s, cert, opt);
    const auto [C, S] = advanced_cosine_coefficients(0.25, 2.0);
    const double err = max_error(rep.solution, [&](double t) { return C * std::cos(t) + S * std::sin(t); }, -20, 20);
    return {cert.passed() && err <= 1e-6, fmt("sup error %.3g on [-20, 20]", err)};
}

Outcome resolvent_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Mat A(1, 1);
    A(0, 0) = -2.0;
    const auto R = build_resolvent(A, [](double t) {
        Mat b(1, 1);
        b(0, 0) = -0.25 * std::exp(-t);
        return b;
    });
    double err = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double t = 1e-3 * i;
        err = std::max(err, std::abs(R.at(t)(0, 0) - scalar_resolvent(t)));
    }
    const double elapsed = seconds_since(t0);
    return {err <= 1e-6 && elapsed < 5.0, fmt("sup error %.3g on [0, 10], %.2f s", err, elapsed)};
}

Outcome evolution_invariants() {
    const auto fam = EvolutionFamily::scalar_sinusoid(1, 2.0, 1.0, 1.0);
    const auto co = cocycle_residual(fam, 100, -10.0, 10.0);
    const auto st = certify_stability(fam, StabilityPlan::standard(), std::pair{1.0, 1.0});
    return {co.max_residual <= 1e-8 && st.pass && st.worst_slack >= 0.0,
            fmt("cocycle %.3g over %zu triples, stability slack %.3g", co.max_residual, co.triples, st.worst_slack)};
}

Outcome heat_demo() {
    const HeatDemoParams params;
    const HeatDemo d = heat_demo_assemble(params);
    const auto cert = certify(d.spec, CertifyOptions{std::nullopt, d.rho});
    const auto rep = picard_solve(d.spec, cert);
    const Mat G = heat_demo_augmented_generator(params);
    const Vec u0 = d.spec.initial_state();
    const Eigen::Index m = u0.size();
    double err = 0.0;
    for (std::size_t i = 0; i < rep.solution.size(); ++i) {
        const double t = rep.solution.grid()[i];
        Vec z = Vec::Zero(G.rows());
        z.head(m) = u0;
        const Vec exact = ((t * G).exp() * z).head(m);
        err = std::max(err, (rep.solution.value(i) - exact).norm());
    }
    bool bounded = d.decay.holds && !d.decay.rows.empty();
    for (const auto& row : d.decay.rows) bounded = bounded && row.norm <= row.bound;
    const ConditionCheck* rho = d.find("rho");
    const bool audited = rho != nullptr && rho->holds;
    return {cert.passed() && err <= 1e-6 && bounded && audited,
            fmt("max |u - R u0| %.3g, decay rows %zu, rho %.4g >= %.4g", err, d.decay.rows.size(),
                rho ? rho->lhs : 0.0, rho ? rho->rhs : 0.0)};
}

Outcome bohr_neugebauer() {
    ProblemSpec s = sinusoid_oracle_spec(-110.0, 110.0);
    const auto cert = certify(s);
    SolverOptions opt;
    opt.tol = 1e-10;
    const SampledPath y = picard_solve(s, cert, opt).solution;
    const auto good = bohr_neugebauer_verdict(s, y);

    Mat bent = y.values();
    for (Eigen::Index j = 0; j < bent.cols(); ++j) bent(0, j) += 0.1 * y.grid()[static_cast<std::size_t>(j)];
    const auto bad = bohr_neugebauer_verdict(s, y.with_values(bent));

    const auto& nets = good.compactness.net_sizes;
    const bool same_nets = nets.size() == 2 && nets[0] == nets[1];
    const bool ok = same_nets && good.compactness.verdict == DiagVerdict::consistent &&
                    good.bochner.verdict == DiagVerdict::consistent &&
                    bad.compactness.verdict == DiagVerdict::inconsistent &&
                    bad.bochner.verdict == DiagVerdict::inconsistent;
    return {ok, fmt("nets %zu/%zu, Bochner %s; corrupted: range %s, Bochner %s", nets.size() > 0 ? nets[0] : 0,
                    nets.size() > 1 ? nets[1] : 0, to_string(good.bochner.verdict).c_str(),
                    to_string(bad.compactness.verdict).c_str(), to_string(bad.bochner.verdict).c_str())};
}

Outcome aaa_machinery() {
    const auto grid = uniform_grid(0.0, 60.0, 0.01);
    const auto p = scalar_path(grid, [](double t) { return std::sin(t) + std::exp(-t); }, DomainKind::half_line);
    const auto e = aaa_split_estimate(p, 10.0);
    const double norm = aaa_norm(e.decomposition);
    return {e.residual <= 1e-4 && std::abs(norm - 2.0) <= 1e-3,
            fmt("residual %.3g, aaa norm %.6f", e.residual, norm)};
}

Outcome integral_inequality() {
    TwoTimeEnvelope k1{[](double t, double s) { return 0.25 * std::exp(-(t - s)); }, TailBound::exponential(0.25, 1.0),
                       "k1"};
    TwoTimeEnvelope k2{[](double t, double s) { return 0.25 * std::exp(-(s - t)); }, TailBound::exponential(0.25, 1.0),
                       "k2"};
    const auto grid = uniform_grid(-20.0, 20.0, 0.5);
    const auto wide = uniform_grid(-80.0, 80.0, 0.05);

    struct Case {
        std::function<double(double)> a, v;
    };
    const std::vector<Case> battery{
        {[](double) { return 1.0; }, [](double) { return 1.9; }},
        {[](double) { return 1.0; }, [](double) { return 2.0; }},
        {[](double t) { return 1.0 + 0.5 * std::sin(t); }, [](double t) { return 1.0 + 0.5 * std::sin(t); }},
        {[](double t) { return 1.0 + 0.5 * std::cos(t); }, [](double t) { return 1.2 + 0.2 * std::cos(t); }},
    };
    int violations = 0;
    double rho = 0.0;
    for (const auto& c : battery) {
        const auto r = check_integral_inequality(c.a, k1, k2, scalar_path(wide, c.v), grid);
        rho = r.rho.value;
        if (!r.hypothesis_holds || !r.conclusion_holds) ++violations;
    }
    const auto z = check_integral_inequality([](double) { return 0.0; }, k1, k2,
                                             scalar_path(wide, [](double) { return 0.0; }), grid);
    const bool zero = z.hypothesis_holds && z.bound == 0.0 && z.v_sup <= 1e-12;
    return {violations == 0 && zero,
            fmt("rho %.4g, %d violations over %zu cases, zero case bound %.3g", rho, violations, battery.size(),
                z.bound)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"zero-forcing fixed point", zero_forcing},
        {"scalar convolution oracle", convolution_oracle},
        {"contraction rate and a-priori bound", contraction_rate},
        {"uniqueness from two starts", uniqueness},
        {"advanced-kernel mirror", advanced_mirror},
        {"resolvent oracle", resolvent_oracle},
        {"evolution invariants", evolution_invariants},
        {"heat demo", heat_demo},
        {"Bohr-Neugebauer consistency", bohr_neugebauer},
        {"AAA machinery", aaa_machinery},
        {"integral inequality checker", integral_inequality},
    };
    int failed = 0;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%2d %s %s: %s\n", index++, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

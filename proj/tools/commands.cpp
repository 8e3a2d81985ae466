#include "commands.hpp"

#include "aafix/bohr_neugebauer.hpp"
#include "aafix/certificate_io.hpp"
#include "aafix/diagnostics.hpp"
#include "aafix/operators.hpp"
#include "aafix/path_csv.hpp"

#include <CLI11.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace aafix::cli {

namespace fs = std::filesystem;

namespace {

fs::path prepare(const std::string& dir) {
    fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path& file, const std::string& text) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write '" + file.string() + "'");
    out << text;
}

const ProblemSpec& need_spec(const RunConfig& cfg) {
    if (!cfg.spec) throw ConfigError("config has no [problem] section");
    return *cfg.spec;
}

std::string out_dir(const RunConfig& cfg, const CommandOptions& opt) {
    return opt.out_dir.empty() || (opt.out_dir == "." && !cfg.out_dir.empty()) ? cfg.out_dir : opt.out_dir;
}

SolverOptions solver_options(const RunConfig& cfg, const CommandOptions& opt) {
    SolverOptions so = cfg.solve;
    if (opt.tol) {
        if (!(*opt.tol > 0.0)) throw ConfigError("--tol must be positive");
        so.tol = *opt.tol;
    }
    so.allow_uncertified = so.allow_uncertified || opt.allow_uncertified;
    return so;
}

// Solves under cert and writes the solution, certificate and solver report.
int solve_and_write(const ProblemSpec& spec, const ContractionCertificate& cert, const SolverOptions& so,
                    const fs::path& dir, std::ostream& log, SolverReport* keep = nullptr) {
    write_text(dir / "certificate.txt", certificate_to_string(cert));
    if (!cert.passed() && !so.allow_uncertified) {
        log << "certificate " << cert.id() << " failed (" << cert.violated << "); not solving\n";
        return exit_fail;
    }
    SolverReport rep;
    try {
        rep = picard_solve(spec, cert, so);
    } catch (const NonContractionError& e) {
        log << "solve aborted: " << e.what() << '\n';
        return exit_fail;
    }
    write_path_csv((dir / "solution.csv").string(), rep.solution);
    std::ostringstream text;
    write_solver_report(text, rep);
    write_text(dir / "solver_report.txt", text.str());
    log << "solved with " << rep.iterations << " iterations, residual " << format_double(rep.residual)
        << (rep.certified ? "" : " (uncertified)") << '\n';
    if (keep) *keep = std::move(rep);
    return exit_pass;
}

std::string checks_text(const HeatDemo& d) {
    std::ostringstream os;
    os << "demo: heat\n";
    os << "M: " << format_double(d.M) << '\n';
    os << "gamma: " << format_double(d.gamma) << '\n';
    os << "q: " << format_double(d.q) << '\n';
    os << "rho: " << format_double(d.rho) << '\n';
    os << "a_norm: " << format_double(d.a_norm) << '\n';
    os << "base_norm: " << format_double(d.base_norm) << '\n';
    os << "resolvent_residual: " << format_double(d.spec.resolvent->residual) << '\n';
    for (const auto& c : d.checks)
        os << "check: " << c.name << " ;; " << c.expression << " ;; lhs=" << format_double(c.lhs)
           << " ;; rhs=" << format_double(c.rhs) << " ;; " << (c.holds ? "holds" : "violated") << '\n';
    os << "flagged: " << (d.flagged ? "yes" : "no") << '\n';
    for (const auto& n : d.notes) os << "note: " << n << '\n';
    return os.str();
}

int demo_heat(const RunConfig& cfg, const CommandOptions& opt, const fs::path& dir, std::ostream& log) {
    const HeatDemo d = heat_demo_assemble(cfg.heat);
    std::string report = checks_text(d);
    {
        std::ofstream out(dir / "resolvent_decay.csv");
        out << "t,norm,bound\n";
        for (const auto& r : d.decay.rows)
            out << format_double(r.t) << ',' << format_double(r.norm) << ',' << format_double(r.bound) << '\n';
    }
    CertifyOptions co = cfg.certify;
    if (co.rho <= 0.0) co.rho = d.rho;
    const ContractionCertificate cert = certify(d.spec, co);
    log << "heat: certificate " << cert.id() << ' ' << to_string(cert.verdict) << '\n';
    SolverReport rep;
    const int code = solve_and_write(d.spec, cert, solver_options(cfg, opt), dir, log, &rep);
    if (code != exit_pass) {
        write_text(dir / "heat_report.txt", report);
        return code;
    }
    const int n = cfg.heat.n;
    const int mid = (n - 1) / 2;
    {
        std::ofstream out(dir / "heat_probes.csv");
        out << "t,theta,eta\n";
        for (std::size_t i = 0; i < rep.solution.size(); ++i) {
            const Vec v = rep.solution.value(i);
            out << format_double(rep.solution.grid()[i]) << ',' << format_double(v(mid)) << ','
                << format_double(v(n + mid)) << '\n';
        }
    }
    double linear_dev = 0.0;
    for (std::size_t i = 0; i < rep.solution.size(); ++i) {
        const double t = rep.solution.grid()[i];
        linear_dev = std::max(linear_dev, (rep.solution.value(i) - d.spec.resolvent->at(t) * d.spec.u0).norm());
    }
    const bool linear = cfg.heat.b0 == 0.0 && cfg.heat.b1 == 0.0 && cfg.heat.h.weights.empty();
    report += "max |u(t) - R(t)u0|: " + format_double(linear_dev) + (linear ? " (zero nonlinearity: expected 0)\n" : "\n");
    const SampledPath theta = SampledPath::from_function(
        DomainKind::half_line, rep.solution.grid_vector(),
        [&](double t) { return Vec::Constant(1, rep.solution.evaluate(t)(mid)); });
    const double split = std::min(cfg.diagnose.split_time, 0.5 * theta.t_max());
    try {
        const AAASplitEstimate e = aaa_split_estimate(theta, split);
        report += "aaa_split.theta.residual: " + format_double(e.residual) + '\n';
        report += "aaa_split.theta.norm: " + format_double(aaa_norm(e.decomposition)) + '\n';
        report += "aaa_split.theta.note: " + e.note + '\n';
    } catch (const Error& e) {
        report += std::string("aaa_split.theta: not evaluated (") + e.what() + ")\n";
    }
    write_text(dir / "heat_report.txt", report);
    return exit_pass;
}

int demo_delay(const RunConfig& cfg, const CommandOptions& opt, const fs::path& dir, std::ostream& log) {
    DelayDemoParams p = cfg.delay;
    const SolverOptions so = solver_options(cfg, opt);
    p.tol = opt.tol ? so.tol : p.tol;
    p.allow_uncertified = so.allow_uncertified;
    const ProblemSpec spec = delay_demo_spec(p);
    CertifyOptions co = cfg.certify;
    if (p.theorem) co.theorem = p.theorem;
    const ContractionCertificate cert = certify(spec, co);
    log << "delay: certificate " << cert.id() << ' ' << to_string(cert.verdict) << '\n';
    SolverOptions sp = so;
    sp.tol = p.tol;
    SolverReport rep;
    const int code = solve_and_write(spec, cert, sp, dir, log, &rep);
    if (code != exit_pass) return code;

    std::ostringstream os;
    os << "demo: delay\n";
    os << "kappa: " << format_double(p.kappa) << "\ntau: " << format_double(p.tau) << '\n';
    // x' = -x + sin t + kappa x(t - tau): x = Re(c e^{it}), c = -i / (1 + i - kappa e^{-i tau})
    const std::complex<double> c = std::complex<double>(0.0, -1.0) /
                                   (std::complex<double>(1.0, 1.0) - p.kappa * std::polar(1.0, -p.tau));
    const double A = -c.imag(), B = c.real();
    const double from = p.t_min + 40.0;
    double dev = 0.0;
    for (std::size_t i = 0; i < rep.solution.size(); ++i) {
        const double t = rep.solution.grid()[i];
        if (t >= from) dev = std::max(dev, std::abs(rep.solution.value(i)(0) - A * std::sin(t) - B * std::cos(t)));
    }
    os << "closed_form: " << format_double(A) << " sin t + " << format_double(B) << " cos t\n";
    if (from < p.t_max) os << "max deviation from closed form on [" << format_double(from) << ", " << format_double(p.t_max)
                           << "]: " << format_double(dev) << '\n';

    RunConfig dc = cfg;
    DiagnoseSettings& ds = dc.diagnose;
    ds.test = "all";
    ds.shifts.clear();
    ds.probe_min = from - 5.0;
    ds.probe_max = from + 5.0;
    ds.windows = {0.25 * (p.t_max - from), 0.5 * (p.t_max - from)};
    os << diagnose_text(dc, rep.solution);
    write_text(dir / "delay_report.txt", os.str());
    return exit_pass;
}

}  // namespace

void write_solver_report(std::ostream& out, const SolverReport& r) {
    out << "certificate: " << r.certificate_id << '\n';
    out << "certified: " << (r.certified ? "yes" : "no") << '\n';
    out << "contraction: " << format_double(r.contraction) << '\n';
    out << "converged: " << (r.converged ? "yes" : "no") << '\n';
    out << "iterations: " << r.iterations << '\n';
    out << "stop_threshold: " << format_double(r.stop_threshold) << '\n';
    out << "apriori_bound: " << format_double(r.apriori_bound_at_stop) << '\n';
    out << "residual: " << format_double(r.residual) << '\n';
    out << "max_ball_excursion: " << format_double(r.max_ball_excursion) << '\n';
    out << "increments:";
    for (double v : r.increment_norms) out << ' ' << format_double(v);
    out << "\nrates:";
    for (double v : r.measured_rates) out << ' ' << format_double(v);
    out << '\n';
    for (const auto& n : r.notes) out << "note: " << n << '\n';
}

std::string diagnose_text(const RunConfig& cfg, const SampledPath& p) {
    const DiagnoseSettings& ds = cfg.diagnose;
    std::ostringstream os;
    const bool all = ds.test == "all";
    auto emit = [&](const DiagnosticReport& r) {
        write_report(os, r);
        os << '\n';
    };
    if (ds.test == "bohr_neugebauer") {
        BNOptions bo;
        bo.eps = ds.eps;
        bo.windows = ds.windows;
        bo.shifts = ds.shift_list(p.t_max());
        bo.probe_grid = ds.probes();
        bo.tol = ds.tol;
        write_report(os, bohr_neugebauer_verdict(need_spec(cfg), p, bo));
        return os.str();
    }
    if (all || ds.test == "range") emit(range_compactness_trend(p, ds.eps, ds.windows));
    if (all || ds.test == "bochner") {
        const auto shifts = ds.shift_list(p.t_max());
        if (shifts.empty()) {
            if (!all) throw DomainError("bochner: no shift fits inside the sampled window");
            os << "test: bochner\nverdict: indeterminate\nevidence: no shift fits inside the sampled window\n\n";
        } else {
            emit(bochner_test(p, shifts, ds.probes(), ds.tol));
        }
    }
    if (ds.test == "aaa" || (all && p.domain() == DomainKind::half_line)) {
        const AAASplitEstimate e = aaa_split_estimate(p, ds.split_time);
        os << "test: aaa_split\nsplit_time: " << format_double(e.split_time) << "\nresidual: " << format_double(e.residual)
           << "\naaa_norm: " << format_double(aaa_norm(e.decomposition)) << "\nrecurrence: " << format_double(e.recurrence)
           << "\nrecurrence_defect: " << format_double(e.recurrence_defect) << "\nnote: " << e.note << "\n\n";
    }
    return os.str();
}

int cmd_certify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
    const ProblemSpec& spec = need_spec(cfg);
    const fs::path dir = prepare(out_dir(cfg, opt));
    const ContractionCertificate cert = certify(spec, cfg.certify);
    write_text(dir / "certificate.txt", certificate_to_string(cert));
    log << "certificate " << cert.id() << ": " << to_string(cert.verdict) << ", L = " << format_double(cert.contraction);
    if (!cert.passed()) log << " (violated: " << cert.violated << ")";
    log << '\n';
    return cert.passed() ? exit_pass : exit_fail;
}

int cmd_solve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
    const ProblemSpec& spec = need_spec(cfg);
    const fs::path dir = prepare(out_dir(cfg, opt));
    const ContractionCertificate cert = certify(spec, cfg.certify);
    return solve_and_write(spec, cert, solver_options(cfg, opt), dir, log);
}

int cmd_diagnose(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
    if (opt.path.empty()) throw ConfigError("diagnose needs --path <csv>");
    const SampledPath p = read_path_csv(opt.path, cfg.diagnose.domain);
    const fs::path dir = prepare(out_dir(cfg, opt));
    const std::string text = diagnose_text(cfg, p);
    write_text(dir / "diagnostics.txt", text);
    log << text;
    return exit_pass;
}

int cmd_demo(const std::string& name, const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
    const fs::path dir = prepare(out_dir(cfg, opt));
    if (name == "heat") return demo_heat(cfg, opt, dir, log);
    if (name == "delay") return demo_delay(cfg, opt, dir, log);
    throw ConfigError("unknown demo '" + name + "' (heat or delay)");
}

int run_cli(int argc, char** argv, std::ostream& log, std::ostream& err) {
    CLI::App app{"Certified fixed-point solver and almost-automorphy diagnostics"};
    app.require_subcommand(1);
    std::string config;
    CommandOptions opt;
    double tol = 0.0;
    std::string demo;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--tol", tol, "solver tolerance");
        sub->add_flag("--allow-uncertified", opt.allow_uncertified, "iterate even when the certificate fails");
    };
    CLI::App* certify_cmd = app.add_subcommand("certify", "certify a problem");
    certify_cmd->add_option("--config", config, "INI run configuration")->required();
    common(certify_cmd);
    CLI::App* solve_cmd = app.add_subcommand("solve", "certify and solve a problem");
    solve_cmd->add_option("--config", config, "INI run configuration")->required();
    common(solve_cmd);
    CLI::App* diag_cmd = app.add_subcommand("diagnose", "run diagnostics on a path CSV");
    diag_cmd->add_option("--config", config, "INI run configuration");
    diag_cmd->add_option("--path", opt.path, "path CSV (t,v1,...,vd)")->required();
    common(diag_cmd);
    CLI::App* demo_cmd = app.add_subcommand("demo", "run the heat or delay demo");
    demo_cmd->add_option("name", demo, "heat | delay")->required();
    demo_cmd->add_option("--config", config, "INI run configuration");
    common(demo_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        log << app.help();
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "aafix: " << e.what() << '\n';
        return exit_error;
    }
    try {
        if (tol != 0.0) opt.tol = tol;
        const RunConfig cfg = config.empty() ? RunConfig{} : load_config(config);
        if (*certify_cmd) return cmd_certify(cfg, opt, log);
        if (*solve_cmd) return cmd_solve(cfg, opt, log);
        if (*diag_cmd) return cmd_diagnose(cfg, opt, log);
        return cmd_demo(demo, cfg, opt, log);
    } catch (const std::exception& e) {
        err << "aafix: " << e.what() << '\n';
        return exit_error;
    }
}

}  // namespace aafix::cli

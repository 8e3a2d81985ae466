#include "aafix/certifier.hpp"

#include "aafix/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aafix {

namespace {

constexpr TheoremId kAllTheorems[] = {
    TheoremId::ball_zero,           TheoremId::shifted_ball,           TheoremId::radius_search,
    TheoremId::half_line_ball,      TheoremId::half_line_shifted_ball, TheoremId::half_line_radius_search,
    TheoremId::evolution_ball,      TheoremId::evolution_shifted_ball, TheoremId::evolution_radius_search,
    TheoremId::evolution_constant_lipschitz, TheoremId::resolvent_ball, TheoremId::resolvent_shifted_ball,
    TheoremId::delay_ball,          TheoremId::delay_shifted_ball,
};

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

void add_check(ContractionCertificate& c, std::string name, std::string expr, double lhs, double rhs, bool strict) {
    InequalityCheck k;
    k.name = std::move(name);
    k.expression = std::move(expr);
    k.lhs = lhs;
    k.rhs = rhs;
    k.strict = strict;
    k.slack = rhs - lhs;
    k.holds = std::isfinite(k.slack) && (strict ? k.slack > c.slack_margin : k.slack >= 0.0);
    c.audit.push_back(std::move(k));
}

void settle(ContractionCertificate& c) {
    c.verdict = Verdict::pass;
    for (const auto& k : c.audit) {
        if (!k.holds) {
            c.verdict = Verdict::fail;
            c.violated = k.name + ": " + k.expression + " (lhs " + num(k.lhs) + ", rhs " + num(k.rhs) + ")";
            return;
        }
    }
}

ContractionCertificate start(TheoremId id, double slack) {
    ContractionCertificate c;
    c.theorem = id;
    c.slack_margin = slack;
    return c;
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw CertificationError(std::string(what) + " must be positive and finite");
}

// Ball of radius rho around y0 with |y0| <= rho and contraction below rho/(rho+|y0|).
void ball_checks(ContractionCertificate& c, double L, double b, double rho, const std::string& lexpr) {
    require_positive(rho, "rho");
    c.contraction = L;
    c.base_norm = b;
    c.rho = rho;
    add_check(c, "base point in ball", "|y0| <= rho", b, rho, false);
    add_check(c, "contraction", lexpr + " < rho/(rho+|y0|)", L, rho / (rho + b), true);
}

void shifted_checks(ContractionCertificate& c, double L, double step, double rho) {
    if (!(L < 1.0)) throw CertificationError("shifted ball needs a contraction constant below 1, got " + num(L));
    c.contraction = L;
    c.step_norm = step;
    c.rho = rho;
    const double theta = step / (1.0 - L);
    c.theta = theta;
    add_check(c, "contraction below one", "L < 1", L, 1.0, true);
    if (theta <= c.slack_margin) {
        settle(c);
        if (c.passed()) {
            c.verdict = Verdict::degenerate_pass;
            c.notes.push_back("theta = 0: the base point is already the fixed point");
        }
        return;
    }
    require_positive(rho, "rho");
    add_check(c, "shifted ball", "theta = |Gamma y0 - y0|/(1-L) <= rho", theta, rho, false);
    settle(c);
}

double golden_max(const std::function<double(double)>& phi, double a, double b, int iters) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = phi(c), fd = phi(d);
    for (int i = 0; i < iters; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = phi(d);
        }
    }
    return fc >= fd ? c : d;
}

EnvelopeValue absent(const char* what) {
    EnvelopeValue v;
    v.computed = true;
    v.note = what;
    return v;
}

EnvelopeValue envelope_or_zero(const TwoTimeEnvelope& env, Orientation o, const std::vector<double>& grid,
                               double tol) {
    if (!env) return absent("no envelope");
    return envelope_constant(env, o, grid, tol);
}

double value_of(const EnvelopeValue& v) { return v.computed ? v.value : 0.0; }

double auto_ball_rho(double L, double b) {
    if (b == 0.0) return 1.0;
    if (!(L < 1.0)) return b;
    return std::max(b, 2.0 * L * b / (1.0 - L));
}

bool is_shifted(TheoremId id) {
    return id == TheoremId::shifted_ball || id == TheoremId::half_line_shifted_ball ||
           id == TheoremId::evolution_shifted_ball || id == TheoremId::resolvent_shifted_ball ||
           id == TheoremId::delay_shifted_ball;
}

void stamp(ContractionCertificate& c, const ProblemSpec& spec, const EnvelopeConstants& k, const SampledPath& y0,
           const LipschitzEstimate& lf) {
    c.variant = spec.variant;
    c.problem = spec.name;
    c.constants = k;
    c.base_point = y0;
    c.base_norm = sup_norm(y0);
    c.notes.push_back("L_f: " + lf.source);
    if (lf.empirical && c.verdict == Verdict::pass) {
        c.verdict = Verdict::empirical_pass;
        c.notes.push_back("Lipschitz constant estimated by sampling; certificate downgraded to empirical-pass");
    }
}

}  // namespace

std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::ball_zero: return "ball-zero";
        case TheoremId::shifted_ball: return "shifted-ball";
        case TheoremId::radius_search: return "radius-search";
        case TheoremId::half_line_ball: return "half-line-ball";
        case TheoremId::half_line_shifted_ball: return "half-line-shifted-ball";
        case TheoremId::half_line_radius_search: return "half-line-radius-search";
        case TheoremId::evolution_ball: return "evolution-ball";
        case TheoremId::evolution_shifted_ball: return "evolution-shifted-ball";
        case TheoremId::evolution_radius_search: return "evolution-radius-search";
        case TheoremId::evolution_constant_lipschitz: return "evolution-constant-lipschitz";
        case TheoremId::resolvent_ball: return "resolvent-ball";
        case TheoremId::resolvent_shifted_ball: return "resolvent-shifted-ball";
        case TheoremId::delay_ball: return "delay-ball";
        case TheoremId::delay_shifted_ball: return "delay-shifted-ball";
    }
    return "unknown";
}

TheoremId theorem_from_string(const std::string& name) {
    for (auto id : kAllTheorems)
        if (to_string(id) == name) return id;
    throw ConfigError("unknown theorem '" + name + "'");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::empirical_pass: return "empirical-pass";
        case Verdict::degenerate_pass: return "degenerate-pass";
        case Verdict::fail: return "fail";
    }
    return "fail";
}

Verdict verdict_from_string(const std::string& name) {
    for (auto v : {Verdict::pass, Verdict::empirical_pass, Verdict::degenerate_pass, Verdict::fail})
        if (to_string(v) == name) return v;
    throw Error("unknown verdict '" + name + "'");
}

ContractionCertificate decide_ball(const BallData& d) {
    auto c = start(d.theorem, d.slack);
    ball_checks(c, d.contraction, d.base_norm, d.rho, "L");
    settle(c);
    return c;
}

ContractionCertificate decide_ball_zero(double L_f, double N1, double N2, double base_norm, double rho,
                                        bool delayed_only, double slack) {
    auto c = start(TheoremId::ball_zero, slack);
    const double L = delayed_only ? 2.0 * (L_f + N1) : 2.0 * (L_f + N1 + N2);
    c.inputs = {{"L_f", L_f}, {"N1", N1}};
    if (!delayed_only) c.inputs["N2"] = N2;
    ball_checks(c, L, base_norm, rho, delayed_only ? "2(L_f+N1)" : "2(L_f+N1+N2)");
    settle(c);
    return c;
}

ContractionCertificate decide_shifted_ball(const ShiftedBallData& d) {
    auto c = start(d.theorem, d.slack);
    shifted_checks(c, d.contraction, d.step_norm, d.rho);
    return c;
}

RadiusScan scan_radius(const std::function<double(double)>& objective, double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 3) throw Error("scan_radius: need 0 < lo < hi and >= 3 points");
    const double llo = std::log(lo), lhi = std::log(hi);
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        logs[static_cast<std::size_t>(k)] = llo + (lhi - llo) * k / (points - 1);
        const double v = objective(std::exp(logs[static_cast<std::size_t>(k)]));
        if (!std::isfinite(v)) throw CertificationError("radius objective not finite at r = " + num(std::exp(logs[k])));
        if (v > best_val) {
            best_val = v;
            best = static_cast<std::size_t>(k);
        }
    }
    const double a = logs[best == 0 ? 0 : best - 1];
    const double b = logs[std::min(best + 1, logs.size() - 1)];
    RadiusScan out{std::exp(logs[best]), best_val};
    const double u = golden_max([&](double x) { return objective(std::exp(x)); }, a, b, 60);
    const double v = objective(std::exp(u));
    if (v > out.value) out = {std::exp(u), v};
    return out;
}

ContractionCertificate decide_radius_search(const RadiusSearchData& d) {
    if (!d.objective || !d.contraction_at) throw CertificationError("radius search needs an objective and a contraction curve");
    auto c = start(d.theorem, d.slack);
    const RadiusScan s = scan_radius(d.objective, d.lo, d.hi, d.points);
    c.witness_radius = s.R;
    c.rho = s.R;
    c.contraction = d.contraction_at(s.R);
    add_check(c, "radius condition", "sup_r objective(r) > rhs", d.rhs, s.value, true);
    add_check(c, "contraction at witness", "L(R) < 1", c.contraction, 1.0, true);
    c.notes.push_back("witness radius R = " + num(s.R) + " from a " + std::to_string(d.points) +
                      "-point log grid on [" + num(d.lo) + ", " + num(d.hi) + "] plus golden-section refinement");
    c.notes.push_back("the certified ball is centred at 0 with radius R");
    settle(c);
    return c;
}

namespace {

double evolution_L(const EvolutionData& d) { return d.M * d.L_g + (d.M / d.delta) * (1.0 + d.C_B) * d.L_F; }
double resolvent_L(const EvolutionData& d) { return d.M * d.L_g + (d.M / d.delta) * d.L_F; }

void evolution_inputs(ContractionCertificate& c, const EvolutionData& d, bool with_cb) {
    require_positive(d.M, "M");
    require_positive(d.delta, "delta");
    c.inputs = {{"M", d.M}, {"delta", d.delta}, {"L_g", d.L_g}, {with_cb ? "L_F" : "L_f", d.L_F}};
    if (with_cb) c.inputs["C_B"] = d.C_B;
}

}  // namespace

ContractionCertificate decide_evolution_ball(const EvolutionData& d) {
    auto c = start(TheoremId::evolution_ball, d.slack);
    evolution_inputs(c, d, true);
    require_positive(d.rho, "rho");
    const double L = evolution_L(d);
    c.contraction = L;
    c.base_norm = d.base_norm;
    c.rho = d.rho;
    add_check(c, "base point in ball", "|y0| <= rho", d.base_norm, d.rho, false);
    add_check(c, "ball invariance", "M L_g + (M/delta)(1+C_B) L_F <= rho/(rho+|y0|)", L, d.rho / (d.rho + d.base_norm),
              false);
    add_check(c, "contraction below one", "M L_g + (M/delta)(1+C_B) L_F < 1", L, 1.0, true);
    settle(c);
    return c;
}

ContractionCertificate decide_evolution_shifted_ball(const EvolutionData& d) {
    auto c = start(TheoremId::evolution_shifted_ball, d.slack);
    evolution_inputs(c, d, true);
    c.xi0 = evolution_L(d);
    shifted_checks(c, *c.xi0, d.step_norm, d.rho);
    return c;
}

ContractionCertificate decide_evolution_constant_lipschitz(const EvolutionData& d) {
    auto c = start(TheoremId::evolution_constant_lipschitz, d.slack);
    evolution_inputs(c, d, true);
    c.contraction = evolution_L(d);
    c.base_norm = d.base_norm;
    add_check(c, "constant Lipschitz condition", "delta L_g + (1+C_B) L_F < delta/M", d.delta * d.L_g + (1.0 + d.C_B) * d.L_F,
              d.delta / d.M, true);
    c.notes.push_back("the radius condition is unbounded in r; the solution is unique in the whole space");
    settle(c);
    return c;
}

ContractionCertificate decide_resolvent_ball(const EvolutionData& d) {
    auto c = start(TheoremId::resolvent_ball, d.slack);
    evolution_inputs(c, d, false);
    require_positive(d.rho, "rho");
    c.contraction = resolvent_L(d);
    c.base_norm = d.base_norm;
    c.rho = d.rho;
    add_check(c, "base point in ball", "|y0| <= rho", d.base_norm, d.rho, false);
    add_check(c, "contraction", "delta L_g + L_f < rho delta/(M (rho+|y0|))", d.delta * d.L_g + d.L_F,
              d.rho * d.delta / (d.M * (d.rho + d.base_norm)), true);
    settle(c);
    return c;
}

ContractionCertificate decide_resolvent_shifted_ball(const EvolutionData& d) {
    auto c = start(TheoremId::resolvent_shifted_ball, d.slack);
    evolution_inputs(c, d, false);
    shifted_checks(c, resolvent_L(d), d.step_norm, d.rho);
    return c;
}

ContractionCertificate decide_delay_ball(const DelayData& d) {
    auto c = start(TheoremId::delay_ball, d.slack);
    require_positive(d.M, "M");
    require_positive(d.delta, "delta");
    require_positive(d.rho, "rho");
    c.inputs = {{"M", d.M}, {"delta", d.delta}, {"L_f", d.L_f}, {"forcing_sup", d.forcing_sup}};
    c.contraction = (d.M / d.delta) * d.L_f;
    c.base_norm = d.base_norm;
    c.rho = d.rho;
    add_check(c, "forcing bound", "(M/delta) sup|f(.,0)| <= rho", (d.M / d.delta) * d.forcing_sup, d.rho, false);
    add_check(c, "contraction", "M L_f < rho delta/(rho+|x0|)", d.M * d.L_f, d.rho * d.delta / (d.rho + d.base_norm),
              true);
    settle(c);
    return c;
}

ContractionCertificate decide_delay_shifted_ball(const DelayData& d) {
    auto c = start(TheoremId::delay_shifted_ball, d.slack);
    require_positive(d.M, "M");
    require_positive(d.delta, "delta");
    c.inputs = {{"M", d.M}, {"delta", d.delta}, {"L_f", d.L_f}};
    shifted_checks(c, (d.M / d.delta) * d.L_f, d.step_norm, d.rho);
    return c;
}

EnvelopeConstants compute_constants(const ProblemSpec& spec) {
    EnvelopeConstants k;
    const auto grid = spec.sup_t_grid();
    const double tol = spec.constants_tol;
    QuadOptions qo;
    qo.tol = tol;
    const Vec z = Vec::Zero(spec.dim);
    switch (spec.variant) {
        case Variant::advanced_delayed:
        case Variant::delayed_only: {
            k.alpha1 = spec.c1 ? envelope_or_zero(spec.c1->lambda, Orientation::delayed, grid, tol) : absent("no kernel");
            k.N1 = spec.c1 ? envelope_or_zero(spec.c1->mu, Orientation::delayed, grid, tol) : absent("no kernel");
            const bool adv = spec.variant == Variant::advanced_delayed && spec.c2;
            k.alpha2 = adv ? envelope_or_zero(spec.c2->lambda, Orientation::advanced, grid, tol) : absent("no kernel");
            k.N2 = adv ? envelope_or_zero(spec.c2->mu, Orientation::advanced, grid, tol) : absent("no kernel");
            break;
        }
        case Variant::half_line: {
            const auto* b1 = spec.b1 ? &*spec.b1 : nullptr;
            const auto* b2 = spec.b2 ? &*spec.b2 : nullptr;
            k.P1 = b1 ? envelope_or_zero(b1->theta, Orientation::half_line_delayed, grid, tol) : absent("no kernel");
            k.P2 = b2 ? envelope_or_zero(b2->theta, Orientation::advanced, grid, tol) : absent("no kernel");
            k.beta1_H5 = b1 ? envelope_or_zero(b1->aa_part.mu, Orientation::half_line_delayed, grid, tol) : absent("no kernel");
            k.beta2_H5 = b2 ? envelope_or_zero(b2->aa_part.mu, Orientation::advanced, grid, tol) : absent("no kernel");
            k.Q1 = grid_sup(
                [&](double t) {
                    double s = 0.0;
                    if (b1 && b1->mu3) s += oriented_integral(b1->mu3, Orientation::half_line_delayed, t, qo);
                    if (b2 && b2->mu3) s += oriented_integral(b2->mu3, Orientation::advanced, t, qo);
                    return s;
                },
                grid, tol);
            k.gamma1 = b1 ? grid_sup(
                                [&](double t) {
                                    if (t <= 0.0) return 0.0;
                                    return integrate_interval([&](double s) { return (*b1)(t, s, z, z); }, 0.0, t, qo)
                                        .value.norm();
                                },
                                grid, tol)
                          : absent("no kernel");
            if (b2) {
                const double bhat0 = b2->bhat ? b2->bhat(0.0, z, z) : 0.0;
                const TailBound tail = b2->total_lambda(bhat0).tail;
                k.gamma2 = grid_sup(
                    [&](double t) {
                        return integrate_advanced([&](double s) { return (*b2)(t, s, z, z); }, t, tail, qo).value.norm();
                    },
                    grid, tol);
            } else {
                k.gamma2 = absent("no kernel");
            }
            break;
        }
        case Variant::evolution_nonlocal:
            if (spec.causal.present()) {
                k.C_B = grid_sup(
                    [&](double s) {
                        if (s <= 0.0) return 0.0;
                        return integrate_interval(
                            [&](double r) { return operator_norm(spec.causal.kernel(s, r)); }, 0.0, s, qo);
                    },
                    grid, tol);
            } else {
                k.C_B = absent("no causal operator");
            }
            break;
        default: break;
    }
    return k;
}

double estimate_lipschitz(const Nonlinearity& f, double radius, const SamplePlan& plan) {
    SamplePlan p = plan;
    p.radius = radius > 0.0 ? radius : 1.0;
    const auto states = p.states(f.dim);
    double best = 0.0;
    for (double t : p.times) {
        std::vector<Vec> vals;
        vals.reserve(states.size());
        for (const auto& [x, y] : states) vals.push_back(f(t, x, y));
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = i + 1; j < states.size(); ++j) {
                const double den = (states[i].first - states[j].first).norm() + (states[i].second - states[j].second).norm();
                if (den <= 0.0) continue;
                best = std::max(best, (vals[i] - vals[j]).norm() / den);
            }
        }
    }
    return best;
}

LipschitzEstimate lipschitz_on_ball(const Nonlinearity& f, double radius, const SamplePlan& plan) {
    if (f.lipschitz) return {*f.lipschitz, false, "declared constant " + num(*f.lipschitz)};
    if (f.lipschitz_curve) {
        const double v = f.lipschitz_curve(radius);
        return {v, false, "declared curve L_f(" + num(radius) + ") = " + num(v)};
    }
    const double v = estimate_lipschitz(f, radius, plan);
    return {v, true, "empirical difference quotients on the ball of radius " + num(radius) + " = " + num(v)};
}

double forcing_sup(const ProblemSpec& spec) {
    const Vec z = Vec::Zero(spec.dim);
    double s = 0.0;
    for (double t : spec.sup_t_grid()) s = std::max(s, spec.f(t, z, z).norm());
    if (spec.f.forcing.kind != Forcing::Kind::zero) {
        const double scale = spec.f.forcing.component < 0 ? std::sqrt(static_cast<double>(spec.dim)) : 1.0;
        s = std::max(s, spec.f.forcing.sup_bound() * scale);
    }
    return s;
}

std::vector<TheoremId> theorems_for(Variant v) {
    switch (v) {
        case Variant::advanced_delayed:
        case Variant::delayed_only: return {TheoremId::ball_zero, TheoremId::shifted_ball, TheoremId::radius_search};
        case Variant::half_line:
            return {TheoremId::half_line_ball, TheoremId::half_line_shifted_ball, TheoremId::half_line_radius_search};
        case Variant::evolution_nonlocal:
            return {TheoremId::evolution_ball, TheoremId::evolution_shifted_ball, TheoremId::evolution_radius_search,
                    TheoremId::evolution_constant_lipschitz};
        case Variant::resolvent_nonlocal: return {TheoremId::resolvent_ball, TheoremId::resolvent_shifted_ball};
        case Variant::delay_parabolic: return {TheoremId::delay_ball, TheoremId::delay_shifted_ball};
    }
    return {};
}

TheoremId default_theorem(const ProblemSpec& spec) {
    const bool curve_only = !spec.f.lipschitz && spec.f.lipschitz_curve;
    switch (spec.variant) {
        case Variant::advanced_delayed:
        case Variant::delayed_only: return curve_only ? TheoremId::radius_search : TheoremId::ball_zero;
        case Variant::half_line: return curve_only ? TheoremId::half_line_radius_search : TheoremId::half_line_ball;
        case Variant::evolution_nonlocal:
            return curve_only ? TheoremId::evolution_radius_search : TheoremId::evolution_ball;
        case Variant::resolvent_nonlocal: return TheoremId::resolvent_ball;
        case Variant::delay_parabolic: return TheoremId::delay_ball;
    }
    return TheoremId::ball_zero;
}

namespace {

bool full_line(Variant v) { return v == Variant::advanced_delayed || v == Variant::delayed_only; }

// Contraction constant of the integral-equation variants given L_f.
double integral_L(const ProblemSpec& spec, const EnvelopeConstants& k, double L_f) {
    if (spec.variant == Variant::half_line) return 2.0 * (L_f + value_of(k.Q1));
    const double n2 = spec.variant == Variant::advanced_delayed ? value_of(k.N2) : 0.0;
    return 2.0 * (L_f + value_of(k.N1) + n2);
}

void integral_inputs(ContractionCertificate& c, const ProblemSpec& spec, const EnvelopeConstants& k, double L_f) {
    c.inputs["L_f"] = L_f;
    if (spec.variant == Variant::half_line) {
        c.inputs["Q1"] = value_of(k.Q1);
        const double full = 2.0 * (L_f + value_of(k.Q1) + value_of(k.beta1_H5) + value_of(k.beta2_H5));
        c.inputs["aa_part_modulus"] = value_of(k.beta1_H5) + value_of(k.beta2_H5);
        if (full >= 1.0 || value_of(k.beta1_H5) + value_of(k.beta2_H5) > 0.0)
            c.notes.push_back("warning: 2(L_f+Q1) omits the aa-part Lipschitz integrals (" +
                              num(value_of(k.beta1_H5) + value_of(k.beta2_H5)) +
                              "); measured Picard rates may exceed the certified constant");
    } else {
        c.inputs["N1"] = value_of(k.N1);
        if (spec.variant == Variant::advanced_delayed) c.inputs["N2"] = value_of(k.N2);
    }
}

ContractionCertificate certify_integral(const ProblemSpec& spec, double rho, TheoremId id) {
    const EnvelopeConstants k = compute_constants(spec);
    const SampledPath y0 = compute_base_point(spec);
    const double b = sup_norm(y0);
    const bool half = spec.variant == Variant::half_line;
    const std::string lexpr = half ? "2(L_f+Q1)" : spec.variant == Variant::delayed_only ? "2(L_f+N1)" : "2(L_f+N1+N2)";
    bool auto_rho = !(rho > 0.0);

    ContractionCertificate c;
    LipschitzEstimate lf;
    if (id == TheoremId::radius_search || id == TheoremId::half_line_radius_search) {
        const double fsup = forcing_sup(spec);
        double rhs = fsup;
        std::string rexpr;
        if (half) {
            rhs += value_of(k.gamma1) + value_of(k.gamma2);
            rexpr = "sup_r (r - 2r L_f(r) - 2r Q1) > sup|f(t,0,0)| + gamma1 + gamma2";
        } else if (spec.variant == Variant::delayed_only) {
            rhs += value_of(k.alpha1);
            rexpr = "sup_r (r - 2r L_f(r) - 2r N1) > alpha1 + sup|f(s,0,0)|";
        } else {
            rhs += value_of(k.alpha1) + value_of(k.alpha2);
            rexpr = "sup_r (r - 2r L_f(r) - 2r N1 - 2r N2) > sup|f(t,0,0)| + alpha1 + alpha2";
        }
        bool empirical = false;
        auto Lf = [&](double r) {
            const auto e = lipschitz_on_ball(spec.f, r, spec.plan);
            empirical = empirical || e.empirical;
            return e.value;
        };
        RadiusSearchData d;
        d.theorem = id;
        d.objective = [&](double r) { return r * (1.0 - integral_L(spec, k, Lf(r))); };
        d.contraction_at = [&](double r) { return integral_L(spec, k, Lf(r)); };
        d.rhs = rhs;
        d.slack = spec.slack;
        c = decide_radius_search(d);
        c.audit.front().expression = rexpr;
        lf = lipschitz_on_ball(spec.f, *c.witness_radius, spec.plan);
        integral_inputs(c, spec, k, lf.value);
        c.inputs["forcing_sup"] = fsup;
        c.inputs["rhs"] = rhs;
    } else if (is_shifted(id)) {
        const SampledPath step = apply_operator(spec, y0);
        const double sn = sup_distance(step, y0);
        double radius = auto_rho ? 2.0 * std::max(b, 1.0) : rho + b;
        lf = lipschitz_on_ball(spec.f, radius, spec.plan);
        double L = integral_L(spec, k, lf.value);
        if (auto_rho) {
            rho = L < 1.0 && sn > 0.0 ? 2.0 * sn / (1.0 - L) : std::max(b, 1.0);
            if (!spec.f.lipschitz) {
                lf = lipschitz_on_ball(spec.f, rho + b, spec.plan);
                L = integral_L(spec, k, lf.value);
            }
        }
        c = decide_shifted_ball({id, L, sn, rho, spec.slack});
        integral_inputs(c, spec, k, lf.value);
    } else {
        lf = lipschitz_on_ball(spec.f, auto_rho ? 2.0 * std::max(b, 1.0) : rho + b, spec.plan);
        double L = integral_L(spec, k, lf.value);
        if (auto_rho) {
            rho = auto_ball_rho(L, b);
            if (!spec.f.lipschitz) {
                lf = lipschitz_on_ball(spec.f, rho + b, spec.plan);
                L = integral_L(spec, k, lf.value);
            }
        }
        auto cc = start(id, spec.slack);
        ball_checks(cc, L, b, rho, lexpr);
        settle(cc);
        c = std::move(cc);
        integral_inputs(c, spec, k, lf.value);
    }
    if (auto_rho && c.witness_radius == std::nullopt) c.notes.push_back("rho chosen automatically: " + num(c.rho));
    stamp(c, spec, k, y0, lf);
    return c;
}

ContractionCertificate certify_mild(const ProblemSpec& spec, double rho, TheoremId id) {
    const EnvelopeConstants k = compute_constants(spec);
    const auto [M, delta] = spec.stability_constants();
    const SampledPath y0 = compute_base_point(spec);
    const double b = sup_norm(y0);
    const bool auto_rho = !(rho > 0.0);
    const double L_g = spec.g.lipschitz();
    const double C_B = value_of(k.C_B);
    const double cb_scale = std::max(1.0, C_B);

    ContractionCertificate c;
    LipschitzEstimate lf;
    auto lip = [&](double ball) { return lipschitz_on_ball(spec.f, ball * (spec.variant == Variant::evolution_nonlocal ? cb_scale : 1.0), spec.plan); };
    double step_norm = 0.0;
    if (is_shifted(id)) step_norm = sup_distance(apply_operator(spec, y0), y0);

    if (spec.variant == Variant::delay_parabolic) {
        DelayData d;
        d.M = M;
        d.delta = delta;
        d.forcing_sup = forcing_sup(spec);
        d.base_norm = b;
        d.step_norm = step_norm;
        d.slack = spec.slack;
        lf = lip(auto_rho ? 2.0 * std::max(b, 1.0) : rho + b);
        d.L_f = lf.value;
        const double L = (M / delta) * d.L_f;
        if (auto_rho) {
            rho = id == TheoremId::delay_ball ? std::max(auto_ball_rho(L, b), (M / delta) * d.forcing_sup)
                  : (L < 1.0 && step_norm > 0.0 ? 2.0 * step_norm / (1.0 - L) : std::max(b, 1.0));
        }
        d.rho = rho;
        c = id == TheoremId::delay_ball ? decide_delay_ball(d) : decide_delay_shifted_ball(d);
    } else {
        EvolutionData d;
        d.M = M;
        d.delta = delta;
        d.C_B = C_B;
        d.L_g = L_g;
        d.base_norm = b;
        d.step_norm = step_norm;
        d.slack = spec.slack;
        if (id == TheoremId::evolution_radius_search) {
            bool empirical = false;
            auto LF = [&](double r) {
                const auto e = lip(r);
                empirical = empirical || e.empirical;
                return e.value;
            };
            const double C = forcing_sup(spec);
            const double g0 = spec.g.at_zero(spec.dim).norm();
            RadiusSearchData r;
            r.theorem = id;
            r.objective = [&](double x) { return delta * x / M - delta * x * L_g - x * LF(x) * (1.0 + C_B); };
            r.contraction_at = [&](double x) { return M * L_g + (M / delta) * (1.0 + C_B) * LF(x); };
            r.rhs = C + delta * (b + g0);
            r.slack = spec.slack;
            c = decide_radius_search(r);
            c.audit.front().expression =
                "sup_r (delta r/M - delta r L_g(r) - r L_F(r)(1+C_B)) > C + delta(|y0| + |g(0)|)";
            c.notes.push_back("|y0| read as the sup-norm of the base point");
            lf = lip(*c.witness_radius);
            c.inputs = {{"M", M}, {"delta", delta}, {"L_g", L_g}, {"L_F", lf.value}, {"C_B", C_B}, {"C", C},
                        {"g0", g0}, {"rhs", r.rhs}};
        } else {
            lf = lip(auto_rho ? 2.0 * std::max(b, 1.0) : rho + b);
            d.L_F = lf.value;
            const double L = spec.variant == Variant::resolvent_nonlocal ? resolvent_L(d) : evolution_L(d);
            if (auto_rho) {
                rho = is_shifted(id) ? (L < 1.0 && step_norm > 0.0 ? 2.0 * step_norm / (1.0 - L) : std::max(b, 1.0))
                                     : auto_ball_rho(L, b);
            }
            d.rho = rho;
            switch (id) {
                case TheoremId::evolution_ball: c = decide_evolution_ball(d); break;
                case TheoremId::evolution_shifted_ball: c = decide_evolution_shifted_ball(d); break;
                case TheoremId::evolution_constant_lipschitz:
                    if (!spec.f.lipschitz) throw CertificationError("constant-Lipschitz form needs a declared constant L_F");
                    c = decide_evolution_constant_lipschitz(d);
                    break;
                case TheoremId::resolvent_ball: c = decide_resolvent_ball(d); break;
                case TheoremId::resolvent_shifted_ball: c = decide_resolvent_shifted_ball(d); break;
                default: throw CertificationError("theorem " + to_string(id) + " does not apply to " + to_string(spec.variant));
            }
        }
    }
    if (auto_rho && !c.witness_radius && id != TheoremId::evolution_constant_lipschitz)
        c.notes.push_back("rho chosen automatically: " + num(c.rho));
    if (spec.variant == Variant::resolvent_nonlocal) c.notes.push_back("decay rate delta = gamma/q of the resolvent bound");
    else if (spec.stability && spec.stability->empirical)
        c.notes.push_back("stability constants fitted from samples: " + spec.stability->message);
    stamp(c, spec, k, y0, lf);
    return c;
}

}  // namespace

ContractionCertificate certify(const ProblemSpec& spec, const CertifyOptions& opt) {
    spec.validate();
    const TheoremId id = opt.theorem.value_or(default_theorem(spec));
    const auto allowed = theorems_for(spec.variant);
    if (std::find(allowed.begin(), allowed.end(), id) == allowed.end())
        throw CertificationError("theorem " + to_string(id) + " does not apply to variant " + to_string(spec.variant));
    if (full_line(spec.variant) || spec.variant == Variant::half_line) return certify_integral(spec, opt.rho, id);
    return certify_mild(spec, opt.rho, id);
}

ContractionCertificate certify_ball_zero(const ProblemSpec& spec, double rho) {
    return certify(spec, {spec.variant == Variant::half_line ? TheoremId::half_line_ball : TheoremId::ball_zero, rho});
}

ContractionCertificate certify_shifted_ball(const ProblemSpec& spec, double rho) {
    return certify(spec,
                   {spec.variant == Variant::half_line ? TheoremId::half_line_shifted_ball : TheoremId::shifted_ball, rho});
}

ContractionCertificate certify_radius_search(const ProblemSpec& spec) {
    return certify(spec, {spec.variant == Variant::half_line ? TheoremId::half_line_radius_search : TheoremId::radius_search,
                          0.0});
}

ContractionCertificate certify_evolution(const ProblemSpec& spec, double rho, std::optional<TheoremId> form) {
    if (full_line(spec.variant) || spec.variant == Variant::half_line)
        throw CertificationError("certify_evolution: variant " + to_string(spec.variant) + " is not an evolution problem");
    return certify(spec, {form.value_or(default_theorem(spec)), rho});
}

BNHypothesisReport decide_bohr_neugebauer(double L_f, double mu_sum, bool warps_aa, bool two_kernel) {
    BNHypothesisReport r;
    r.L_f = L_f;
    r.mu_sup.value = mu_sum;
    r.mu_sup.computed = true;
    r.rho = L_f + mu_sum;
    r.two_kernel = two_kernel;
    r.warps_aa = warps_aa;
    r.pass = r.rho < 1.0 && warps_aa;
    std::ostringstream os;
    os << (two_kernel ? "rho = L_f + sup_t (int mu1 + int mu2)" : "rho = L_f + sup_t int mu1") << " = " << r.rho;
    if (!(r.rho < 1.0)) os << " is not below 1";
    if (!warps_aa) os << "; warps not declared almost automorphic";
    r.note = os.str();
    return r;
}

BNHypothesisReport certify_bohr_neugebauer_hypotheses(const ProblemSpec& spec) {
    if (!full_line(spec.variant))
        throw CertificationError("Bohr-Neugebauer hypotheses are stated for the full-line integral equations");
    const bool two = spec.variant == Variant::advanced_delayed;
    const auto grid = spec.sup_t_grid();
    QuadOptions qo;
    qo.tol = spec.constants_tol;
    const EnvelopeValue mu = grid_sup(
        [&](double t) {
            double s = 0.0;
            if (spec.c1 && spec.c1->mu) s += oriented_integral(spec.c1->mu, Orientation::delayed, t, qo);
            if (two && spec.c2 && spec.c2->mu) s += oriented_integral(spec.c2->mu, Orientation::advanced, t, qo);
            return s;
        },
        grid, spec.constants_tol);
    auto simple = [](const TimeWarp& w) {
        return w.kind() == TimeWarp::Kind::identity || w.kind() == TimeWarp::Kind::shift;
    };
    const bool warps = spec.warps_declared_aa || (simple(spec.a0) && simple(spec.a1) && simple(spec.a2));
    const LipschitzEstimate lf = lipschitz_on_ball(spec.f, spec.plan.radius, spec.plan);
    BNHypothesisReport r = decide_bohr_neugebauer(lf.value, mu.value, warps, two);
    r.mu_sup = mu;
    if (lf.empirical) r.note += "; L_f estimated by sampling";
    return r;
}

}  // namespace aafix

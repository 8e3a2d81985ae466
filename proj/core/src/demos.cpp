#include "aafix/demos.hpp"

#include "aafix/operators.hpp"
#include "aafix/path_csv.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace aafix {

double Relaxation::operator()(double t) const { return value0 * (1.0 - kappa + kappa * std::exp(-rate * t)); }
double Relaxation::d1(double t) const { return -value0 * kappa * rate * std::exp(-rate * t); }
double Relaxation::d2(double t) const { return value0 * kappa * rate * rate * std::exp(-rate * t); }

const ConditionCheck* HeatDemo::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

Mat dirichlet_laplacian(int n) {
    const double h = 1.0 / (n + 1);
    Mat L = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        L(i, i) = -2.0 / (h * h);
        if (i > 0) L(i, i - 1) = 1.0 / (h * h);
        if (i + 1 < n) L(i, i + 1) = 1.0 / (h * h);
    }
    return L;
}

Mat block_generator(const HeatDemoParams& p, const Mat& lap) {
    const int n = p.n;
    Mat A = Mat::Zero(2 * n, 2 * n);
    A.block(0, n, n, n) = Mat::Identity(n, n);
    A.block(n, 0, n, n) = p.alpha.value0 * lap;
    A.block(n, n, n, n) = -p.beta.value0 * Mat::Identity(n, n);
    return A;
}

double f21(const HeatDemoParams& p, double t) {
    return -p.beta.d1(t) + p.beta.value0 * p.alpha.d1(t) / p.alpha.value0;
}
double f22(const HeatDemoParams& p, double t) { return p.alpha.d1(t) / p.alpha.value0; }
double f21_prime(const HeatDemoParams& p, double t) {
    return -p.beta.d2(t) + p.beta.value0 * p.alpha.d2(t) / p.alpha.value0;
}
double f22_prime(const HeatDemoParams& p, double t) { return p.alpha.d2(t) / p.alpha.value0; }

// (M, gamma) with |e^{tA}| <= M e^{-gamma t}, M sampled until the weighted
// norm has fallen well below its maximum.
std::pair<double, double> semigroup_bound(const Mat& A, double gamma) {
    Eigen::EigenSolver<Mat> es(A, false);
    const double abscissa = es.eigenvalues().real().maxCoeff();
    if (!(abscissa < 0.0)) throw Error("heat demo: A is not exponentially stable (spectral abscissa " + format_double(abscissa) + ")");
    if (gamma <= 0.0) gamma = 0.9 * -abscissa;
    if (!(gamma < -abscissa)) throw Error("heat demo: gamma must lie below the spectral decay rate " + format_double(-abscissa));
    const double h = 0.01;
    const Mat Eh = (h * A).exp();
    Mat E = Mat::Identity(A.rows(), A.cols());
    double M = 1.0;
    for (int k = 1; k < 2'000'000; ++k) {
        E = Eh * E;
        const double w = operator_norm(E) * std::exp(gamma * h * k);
        M = std::max(M, w);
        if (k * h > 5.0 / (-abscissa - gamma) && w < 1e-3 * M) break;
    }
    return {M * (1.0 + 1e-9), gamma};
}

template <class Fn>
double weighted_sup(Fn fn, double gamma, double t_end) {
    double s = 0.0;
    for (double t : uniform_grid(0.0, t_end, 1e-3 * t_end)) s = std::max(s, std::abs(fn(t)) * std::exp(gamma * t));
    return s;
}

void add(HeatDemo& d, std::string name, std::string expr, double lhs, double rhs, bool holds) {
    d.checks.push_back({std::move(name), std::move(expr), lhs, rhs, holds});
    if (!holds) d.flagged = true;
}

}  // namespace

Mat heat_demo_augmented_generator(const HeatDemoParams& p) {
    const int n = p.n;
    const Mat lap = dirichlet_laplacian(n);
    Mat G = Mat::Zero(4 * n, 4 * n);
    const Mat I = Mat::Identity(n, n);
    G.block(0, n, n, n) = I;
    G.block(n, 0, n, n) = p.alpha.value0 * lap;
    G.block(n, n, n, n) = -p.beta.value0 * I;
    G.block(n, 2 * n, n, n) = -p.alpha.kappa * p.alpha.rate * p.alpha.value0 * lap;
    G.block(n, 3 * n, n, n) = p.beta.kappa * p.beta.rate * p.beta.value0 * I;
    G.block(2 * n, 0, n, n) = I;
    G.block(2 * n, 2 * n, n, n) = -p.alpha.rate * I;
    G.block(3 * n, n, n, n) = I;
    G.block(3 * n, 3 * n, n, n) = -p.beta.rate * I;
    return G;
}

HeatDemo heat_demo_assemble(const HeatDemoParams& p) {
    if (p.n < 1) throw ConfigError("heat demo: n must be positive");
    if (!(p.alpha.value0 > 0.0) || !(p.beta.value0 > 0.0)) throw ConfigError("heat demo: alpha(0) and beta(0) must be positive");
    if (!(p.p > 1.0)) throw ConfigError("heat demo: p must exceed 1");
    const int n = p.n;
    const int d = 2 * n;
    HeatDemo demo;
    demo.laplacian = dirichlet_laplacian(n);
    demo.A = block_generator(p, demo.laplacian);
    demo.q = p.p / (p.p - 1.0);
    std::tie(demo.M, demo.gamma) = semigroup_bound(demo.A, p.gamma);
    const double M = demo.M, gamma = demo.gamma, q = demo.q;

    const HeatDemoParams params = p;
    demo.F = [params, n](double t) {
        Mat F = Mat::Zero(2 * n, 2 * n);
        F.block(n, 0, n, n) = f21(params, t) * Mat::Identity(n, n);
        F.block(n, n, n, n) = f22(params, t) * Mat::Identity(n, n);
        return F;
    };
    demo.B = [F = demo.F, A = demo.A](double t) { return Mat(F(t) * A); };

    // R1: alpha', alpha'', beta', beta'' times e^{gamma t} bounded
    double r1_rate = std::numeric_limits<double>::infinity();
    for (const Relaxation* r : {&p.alpha, &p.beta})
        if (r->kappa != 0.0) r1_rate = std::min(r1_rate, r->rate);
    add(demo, "R1", "min relaxation rate >= gamma", r1_rate, gamma, r1_rate >= gamma);

    const double t_end = std::max(p.t_max, 20.0 / gamma);
    const double s0 = std::max(weighted_sup([&](double t) { return f21(p, t); }, gamma, t_end),
                               weighted_sup([&](double t) { return f22(p, t); }, gamma, t_end));
    const double s1 = std::max(weighted_sup([&](double t) { return f21_prime(p, t); }, gamma, t_end),
                               weighted_sup([&](double t) { return f22_prime(p, t); }, gamma, t_end));
    add(demo, "R2", "sup max(|F21|,|F22|) e^{gamma t} <= gamma/(pM)", s0, gamma / (p.p * M), s0 <= gamma / (p.p * M));
    add(demo, "R2'", "sup max(|F21'|,|F22'|) e^{gamma t} <= gamma^2/(pM)^2", s1, std::pow(gamma / (p.p * M), 2),
        s1 <= std::pow(gamma / (p.p * M), 2));

    ResolventOptions ro = p.resolvent;
    ro.t_max = p.t_max;
    ResolventOperator R = build_resolvent(demo.A, demo.B, ro);
    R.decay = ResolventDecay{M, gamma, q};
    demo.decay = decay_table(R, *R.decay, uniform_grid(0.0, p.t_max, 0.25));
    add(demo, "decay", "min_t (M e^{-gamma t/q} - |R(t)|) >= 0", demo.decay.worst_slack, 0.0, demo.decay.holds);

    ProblemSpec& s = demo.spec;
    s.name = "heat";
    s.variant = Variant::resolvent_nonlocal;
    s.dim = d;
    s.t_min = 0.0;
    s.t_max = p.t_max;
    s.step = p.step;
    s.resolvent = std::make_shared<const ResolventOperator>(std::move(R));
    if (p.u0.size() == 0) {
        s.u0 = Vec::Zero(d);
        const double h = 1.0 / (n + 1);
        for (int i = 0; i < n; ++i) s.u0(i) = std::sin(std::numbers::pi * (i + 1) * h);
    } else {
        if (p.u0.size() != d) throw ConfigError("heat demo: u0 must have 2n components");
        s.u0 = p.u0;
    }
    s.g = p.h;

    const Forcing a = p.a;
    const double b0 = p.b0, b1 = p.b1;
    demo.a_norm = a.sup_bound();
    Nonlinearity& f = s.f;
    f.name = "heat";
    f.dim = d;
    f.eval = [a, b0, b1, n](double t, const Vec& x, const Vec&) {
        Vec out = Vec::Zero(2 * n);
        out.tail(n) = a.scalar(t) * (Vec::Constant(n, b0) + b1 * x.head(n));
        return out;
    };
    f.lipschitz = demo.a_norm * std::abs(b1);
    s.validate();

    const double h0 = s.g.at_zero(d).norm();
    const double b_at0 = std::abs(b0) * std::sqrt(static_cast<double>(n));
    const double rho_rhs = M * (s.u0.norm() + h0 + (q / gamma) * demo.a_norm * b_at0);
    demo.rho = p.rho > 0.0 ? p.rho : (rho_rhs > 0.0 ? rho_rhs : 1.0);
    add(demo, "rho", "rho >= M(|u0| + |h(0)| + (q/gamma)|a||b(0)|)", demo.rho, rho_rhs, demo.rho >= rho_rhs);

    demo.base_norm = sup_norm(compute_base_point(s));
    const double denom = demo.rho + demo.base_norm;
    const double h_bound = demo.rho / (p.p * M * denom);
    add(demo, "h-lipschitz", "Lip(h) <= rho/(pM(rho+|y0|))", s.g.lipschitz(), h_bound, s.g.lipschitz() <= h_bound);
    const double b_bound = demo.a_norm > 0.0 ? gamma * demo.rho / (q * M * demo.a_norm * denom)
                                             : std::numeric_limits<double>::infinity();
    add(demo, "b-lipschitz", "Lip(b) <= gamma rho/(qM|a|(rho+|y0|))", std::abs(b1), b_bound, std::abs(b1) <= b_bound);

    demo.notes.push_back("|a| is the AAA norm: sup of the principal part plus sup of the ergodic part");
    demo.notes.push_back("the Lipschitz bounds use |y0|, which depends on h(0) and b(0); y0 is computed first");
    demo.notes.push_back("resolvent residual " + format_double(s.resolvent->residual));
    if (demo.flagged) demo.notes.push_back("some conditions failed; the problem is returned for inspection");
    return demo;
}

ProblemSpec delay_demo_spec(const DelayDemoParams& p) {
    ProblemSpec s;
    s.name = "delay";
    s.variant = Variant::delay_parabolic;
    std::optional<std::pair<double, double>> declared = p.stability;
    if (p.family) {
        s.family = p.family;
    } else {
        s.family = std::make_shared<const EvolutionFamily>(EvolutionFamily::constant(Mat::Constant(1, 1, -1.0), "minus-one"));
        if (!declared) declared = std::pair{1.0, 1.0};
    }
    s.dim = s.family->dim();
    s.stability = certify_stability(*s.family, StabilityPlan::standard(), declared);
    if (p.f.eval) {
        s.f = p.f;
    } else {
        NonlinearityParams np;
        np.family = "linear";
        np.dim = s.dim;
        np.forcing = Forcing{Forcing::Kind::sin, 1.0, 1.0, 0.0, 1.0, -1};
        np.a = p.kappa;
        s.f = make_nonlinearity(np);
    }
    if (s.f.dim != s.dim) throw ConfigError("delay demo: nonlinearity dimension does not match the family");
    s.delay_tau = p.tau;
    s.t_min = p.t_min;
    s.t_max = p.t_max;
    s.step = p.step;
    s.quad_tol = p.quad_tol;
    s.validate();
    return s;
}

DelayDemo delay_demo_solve(const DelayDemoParams& p) {
    DelayDemo d;
    d.spec = delay_demo_spec(p);
    CertifyOptions co;
    co.theorem = p.theorem;
    d.certificate = certify(d.spec, co);
    SolverOptions so;
    so.tol = p.tol;
    so.allow_uncertified = p.allow_uncertified;
    d.report = picard_solve(d.spec, d.certificate, so);
    return d;
}

}  // namespace aafix

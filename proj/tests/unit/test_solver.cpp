#include "aafix/operators.hpp"
#include "aafix/resolvent.hpp"
#include "aafix/solver.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>

using namespace aafix;
using namespace aafix::testing;
using Catch::Approx;

namespace {

ProblemSpec half_line_spec(Forcing::Kind forcing) {
    ProblemSpec s;
    s.name = "half-line";
    s.variant = Variant::half_line;
    s.f = make_nonlinearity(forcing_only(forcing));
    SplitKernelParams p;
    p.aa.orientation = Orientation::half_line_delayed;
    p.aa.coeff = 1.0;
    p.aa.rate = 2.0;
    s.b1 = make_split_kernel(p);
    s.t_max = 10.0;
    s.quad_tol = 1e-10;
    return s;
}

SampledPath on_spec_grid(const ProblemSpec& s, const std::function<double(double)>& fn) {
    return scalar_path(s.grid(), fn, s.domain());
}

}  // namespace

TEST_CASE("apply_gamma", "[solver]") {
    const ProblemSpec z = zero_spec();
    CHECK(sup_norm(apply_gamma(z, on_spec_grid(z, [](double t) { return std::cos(t) + 3.0; }))) == 0.0);

    const ProblemSpec s = sinusoid_oracle_spec(-20, 20);
    const auto first = apply_gamma(s, zero_path(s));
    CHECK(max_error(first, [](double t) { return std::sin(t); }, -20, 20) == 0.0);

    const auto image = apply_gamma(s, on_spec_grid(s, [](double t) { return std::sin(t); }));
    const double err = max_error(
        image, [](double t) { return std::sin(t) + (2 * std::sin(t) - std::cos(t)) / 20.0; }, -10, 20);
    CHECK(err < 1e-9);
}

TEST_CASE("apply_pi", "[solver]") {
    ProblemSpec z = half_line_spec(Forcing::Kind::zero);
    z.b1.reset();
    CHECK(sup_norm(apply_pi(z, on_spec_grid(z, [](double t) { return t; }))) == 0.0);

    const ProblemSpec f = half_line_spec(Forcing::Kind::sin);
    CHECK(max_error(apply_pi(f, zero_path(f)), [](double t) { return std::sin(t); }, 0, 10) == 0.0);

    const ProblemSpec k = half_line_spec(Forcing::Kind::zero);
    const auto image = apply_pi(k, on_spec_grid(k, [](double t) { return std::sin(t); }));
    const double err = max_error(
        image, [](double t) { return (2 * std::sin(t) - std::cos(t) + std::exp(-2 * t)) / 5.0; }, 0, 10);
    CHECK(err < 1e-7);
}

TEST_CASE("full-line and half-line operators agree on causal data", "[solver][property]") {
    // y vanishes on t < 0, so the delayed integral from -inf equals the one from 0
    auto y = [](double t) { return t > 0.0 ? t * t * t * std::exp(-t) : 0.0; };
    ProblemSpec full = sinusoid_oracle_spec(-10, 10);
    KernelParams kp;
    kp.coeff = 1.0;
    kp.rate = 2.0;
    full.c1 = make_kernel(kp);
    full.f = make_nonlinearity(forcing_only(Forcing::Kind::cos));
    ProblemSpec half = half_line_spec(Forcing::Kind::cos);
    const auto g = apply_gamma(full, on_spec_grid(full, y));
    const auto p = apply_pi(half, on_spec_grid(half, y));
    double err = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) err = std::max(err, std::abs(p.value(i)(0) - g.evaluate(p.grid()[i])(0)));
    CHECK(err < 1e-6);
}

TEST_CASE("mild-solution operators", "[solver]") {
    ProblemSpec e;
    e.variant = Variant::evolution_nonlocal;
    auto fam = std::make_shared<EvolutionFamily>(EvolutionFamily::constant(-Mat::Identity(1, 1)));
    e.stability = certify_stability(*fam, StabilityPlan::standard(), std::pair{1.0, 1.0});
    e.family = fam;
    e.u0 = scalar(1.0);
    NonlinearityParams zero;
    zero.family = "zero";
    e.f = make_nonlinearity(zero);
    e.t_max = 8.0;
    const auto ue = apply_mild_evolution(e, on_spec_grid(e, [](double t) { return std::sin(t); }));
    CHECK(max_error(ue, [](double t) { return std::exp(-t); }, 0, 8) < 1e-10);

    ProblemSpec r;
    r.variant = Variant::resolvent_nonlocal;
    Mat A(1, 1);
    A(0, 0) = -2.0;
    auto R = std::make_shared<ResolventOperator>(build_resolvent(A, [](double t) {
        Mat b(1, 1);
        b(0, 0) = -0.25 * std::exp(-t);
        return b;
    }));
    R->decay = ResolventDecay{1.0, 1.0, 1.0};
    r.resolvent = R;
    r.u0 = scalar(1.0);
    r.f = make_nonlinearity(zero);
    r.t_max = 10.0;
    const auto ur = apply_mild_evolution(r, zero_path(r));
    CHECK(max_error(ur, scalar_resolvent, 0, 10) < 1e-6);

    ProblemSpec d;
    d.variant = Variant::delay_parabolic;
    d.family = fam;
    d.stability = e.stability;
    d.delay_tau = 1.0;
    d.f = make_nonlinearity(zero);
    d.t_min = -10;
    d.t_max = 10;
    CHECK(sup_norm(apply_mild_evolution(d, on_spec_grid(d, [](double t) { return std::sin(t); }))) == 0.0);
}

TEST_CASE("Picard iteration", "[solver]") {
    const ProblemSpec z = zero_spec();
    const auto zr = picard_solve(z, certify(z));
    CHECK(zr.iterations <= 2);
    CHECK(sup_norm(zr.solution) <= 1e-12);
    CHECK(zr.converged);

    const ProblemSpec s = sinusoid_oracle_spec();
    const auto c = certify(s);
    SolverOptions opt;
    opt.tol = 1e-9;
    opt.keep_iterates = true;
    const auto r = picard_solve(s, c, opt);
    const auto [A, B] = delayed_sinusoid_coefficients(0.25, 2.0);
    auto exact = [&](double t) { return A * std::sin(t) + B * std::cos(t); };
    CHECK(max_error(r.solution, exact, -20, 20) < 1e-6);
    CHECK(r.converged);
    CHECK(r.certificate_id == "ball-zero");
    CHECK(r.stop_threshold == Approx(opt.tol * (1 - c.contraction) / c.contraction));
    CHECK(r.increment_norms.back() <= r.stop_threshold);
    CHECK(r.residual <= 1e-6);
    CHECK(r.max_ball_excursion <= c.rho + opt.tol);
    for (const auto& it : r.iterates) CHECK(sup_distance(it, c.base_point) <= c.rho + opt.tol);
    for (double rate : r.measured_rates) CHECK(rate <= c.contraction + 0.01);

    const auto adv = advanced_oracle_spec();
    const auto ar = picard_solve(adv, certify(adv), opt);
    const auto [C, S] = advanced_cosine_coefficients(0.25, 2.0);
    CHECK(max_error(ar.solution, [&](double t) { return C * std::cos(t) + S * std::sin(t); }, -20, 20) < 1e-6);
}

TEST_CASE("the a-priori bound dominates the true error", "[solver][property]") {
    const ProblemSpec s = sinusoid_oracle_spec(-20, 20);
    const auto c = certify(s);
    SolverOptions opt;
    opt.tol = 1e-6;
    opt.keep_iterates = true;
    const auto r = picard_solve(s, c, opt);
    SolverOptions tight;
    tight.tol = 1e-13;
    const auto star = picard_solve(s, c, tight).solution;
    const double L = c.contraction;
    const double d1 = sup_distance(r.iterates[1], r.iterates[0]);
    for (std::size_t n = 0; n < r.iterates.size(); ++n)
        CHECK(sup_distance(r.iterates[n], star) <= std::pow(L, n) / (1 - L) * d1 + 1e-12);
    CHECK(sup_distance(r.solution, star) <= opt.tol);
}

TEST_CASE("uniqueness from distinct starts", "[solver][property]") {
    const ProblemSpec s = sinusoid_oracle_spec(-20, 20);
    const auto c = certify(s);
    SolverOptions opt;
    opt.tol = 1e-9;
    const auto a = picard_solve(s, c, opt);
    for (double phase : {0.0, 1.3}) {
        Mat v = c.base_point.values();
        for (Eigen::Index j = 0; j < v.cols(); ++j)
            v(0, j) -= 0.5 * c.rho * std::sin(0.8 * c.base_point.grid()[static_cast<std::size_t>(j)] + phase);
        opt.start = c.base_point.with_values(v);
        CHECK(sup_distance(picard_solve(s, c, opt).solution, a.solution) <= 2 * opt.tol);
    }
}

TEST_CASE("uncertified and divergent runs", "[solver]") {
    ProblemSpec s = sinusoid_oracle_spec(-10, 10);
    NonlinearityParams np = forcing_only(Forcing::Kind::sin);
    np.a = 0.95;
    s.f = make_nonlinearity(np);
    const auto c = certify(s);
    REQUIRE_FALSE(c.passed());
    CHECK_THROWS_AS(picard_solve(s, c), CertificationError);
    SolverOptions opt;
    opt.allow_uncertified = true;
    CHECK_THROWS_AS(picard_solve(s, c, opt), NonContractionError);
}

TEST_CASE("residuals", "[solver]") {
    const ProblemSpec s = sinusoid_oracle_spec(-20, 20);
    const auto c = certify(s);
    CHECK(residual(s, c.base_point) > 1e-3);
    SolverOptions opt;
    opt.tol = 1e-12;
    const auto r = picard_solve(s, c, opt);
    CHECK(residual(s, r.solution) <= 2 * s.quad_tol + 1e-12);
}

TEST_CASE("integral inequality checker", "[solver]") {
    TwoTimeEnvelope k1{[](double t, double s) { return 0.5 * std::exp(-2 * (t - s)); }, TailBound::exponential(0.5, 2.0),
                       "k1"};
    TwoTimeEnvelope k2{[](double t, double s) { return 0.5 * std::exp(-2 * (s - t)); }, TailBound::exponential(0.5, 2.0),
                       "k2"};
    const auto grid = uniform_grid(-5, 5, 0.5);
    const auto wide = uniform_grid(-40, 40, 0.1);
    auto one = [](double) { return 1.0; };

    auto r = check_integral_inequality([](double) { return 0.0; }, k1, k2,
                                       scalar_path(wide, [](double) { return 0.0; }), grid);
    CHECK(r.rho.value == Approx(0.5).epsilon(1e-9));
    CHECK(r.bound == 0.0);
    CHECK(r.hypothesis_holds);
    CHECK(r.conclusion_holds);

    r = check_integral_inequality(one, k1, k2, scalar_path(wide, [](double) { return 1.9; }), grid);
    CHECK(r.bound == Approx(2.0).epsilon(1e-9));
    CHECK(r.hypothesis_holds);
    CHECK(r.conclusion_holds);

    r = check_integral_inequality(one, k1, k2, scalar_path(wide, [](double) { return 2.1; }), grid);
    CHECK_FALSE(r.hypothesis_holds);
    CHECK(r.max_hypothesis_violation == Approx(0.05).epsilon(1e-6));
    CHECK_FALSE(r.conclusion_holds);
    CHECK(std::find(grid.begin(), grid.end(), r.witness_t) != grid.end());

    TwoTimeEnvelope heavy{[](double t, double s) { return 2.0 * std::exp(-2 * (t - s)); },
                          TailBound::exponential(2.0, 2.0), "heavy"};
    CHECK_THROWS_AS(check_integral_inequality(one, heavy, k2, scalar_path(wide, one), grid), CertificationError);
}

#include "aafix/demos.hpp"
#include "aafix/families.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace aafix;
using namespace aafix::testing;
using Catch::Approx;

namespace {

double augmented_error(const HeatDemoParams& params, const SampledPath& u) {
    const Mat G = heat_demo_augmented_generator(params);
    const Eigen::Index m = u.dim();
    Vec z = Vec::Zero(G.rows());
    z.head(m) = u.value(0);
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Vec exact = ((u.grid()[i] * G).exp() * z).head(m);
        err = std::max(err, (u.value(i) - exact).norm());
    }
    return err;
}

}  // namespace

TEST_CASE("relaxation functions", "[demos]") {
    const Relaxation r{2.0, 3.0, 0.25};
    CHECK(r(0.0) == 2.0);
    CHECK(r(1.0) == Approx(2.0 * (0.75 + 0.25 * std::exp(-3.0))));
    CHECK(r.d1(0.5) == Approx(-2.0 * 0.25 * 3.0 * std::exp(-1.5)));
    CHECK(r.d2(0.5) == Approx(2.0 * 0.25 * 9.0 * std::exp(-1.5)));
}

TEST_CASE("heat demo with memory matches the augmented system", "[demos]") {
    const HeatDemoParams params;
    const HeatDemo d = heat_demo_assemble(params);
    CHECK_FALSE(d.flagged);
    for (const auto& c : d.checks) CHECK(c.holds);
    CHECK(d.decay.holds);

    for (double t : {0.0, 0.7, 3.0}) CHECK(d.B(t) == Mat(d.F(t) * d.A));

    // alpha and beta share rate and kappa, so F21 = 0 and F22 = -kappa rate e^{-t}
    const ConditionCheck* r2 = d.find("R2");
    REQUIRE(r2 != nullptr);
    CHECK(r2->lhs == Approx(params.alpha.kappa * params.alpha.rate).epsilon(1e-12));
    CHECK(r2->rhs == Approx(d.gamma / (params.p * d.M)));
    CHECK(d.find("missing") == nullptr);

    const auto cert = certify(d.spec, CertifyOptions{std::nullopt, d.rho});
    REQUIRE(cert.passed());
    const auto rep = picard_solve(d.spec, cert);
    CHECK(augmented_error(params, rep.solution) <= 1e-6);
}

TEST_CASE("single-node resolvent agrees with the augmented exponential", "[demos][resolvent]") {
    HeatDemoParams params;
    params.n = 1;
    params.alpha = Relaxation{1.0, 1.5, 0.3};
    params.beta = Relaxation{2.0, 0.5, 0.1};
    params.t_max = 4.0;
    const HeatDemo d = heat_demo_assemble(params);
    const Mat G = heat_demo_augmented_generator(params);
    REQUIRE(G.rows() == 4);
    for (double t : {0.5, 1.0, 2.5, 4.0}) {
        const Mat E = (t * G).exp().topLeftCorner(2, 2);
        CHECK((d.spec.resolvent->at(t) - E).norm() <= 1e-5);
    }
}

TEST_CASE("violated conditions flag the heat demo", "[demos]") {
    HeatDemoParams params;
    params.alpha.kappa = 1.0;
    params.t_max = 2.0;
    const HeatDemo d = heat_demo_assemble(params);
    CHECK(d.flagged);
    const ConditionCheck* r2 = d.find("R2");
    REQUIRE(r2 != nullptr);
    CHECK_FALSE(r2->holds);
    CHECK(r2->lhs > r2->rhs);
    CHECK(d.spec.resolvent != nullptr);

    HeatDemoParams bad;
    bad.p = 1.0;
    CHECK_THROWS_AS(heat_demo_assemble(bad), ConfigError);
    bad = HeatDemoParams{};
    bad.n = 0;
    CHECK_THROWS_AS(heat_demo_assemble(bad), ConfigError);
}

TEST_CASE("delay demo", "[demos]") {
    DelayDemoParams p;
    p.t_min = -40.0;
    NonlinearityParams zero;
    zero.family = "zero";
    p.f = make_nonlinearity(zero);
    auto d = delay_demo_solve(p);
    CHECK(sup_norm(d.report.solution) <= 1e-12);

    p.f = make_nonlinearity(forcing_only(Forcing::Kind::sin));
    d = delay_demo_solve(p);
    CHECK(max_error(d.report.solution, [](double t) { return (std::sin(t) - std::cos(t)) / 2.0; }, -20, 20) <= 1e-6);

    p.f = Nonlinearity{};
    p.t_min = DelayDemoParams{}.t_min;
    d = delay_demo_solve(p);
    CHECK(d.certificate.passed());
    const auto [P, Q] = delay_sinusoid_coefficients(p.kappa, p.tau);
    CHECK(max_error(d.report.solution, [&](double t) { return P * std::sin(t) + Q * std::cos(t); }, -20, 20) <= 1e-6);
}

#include "aafix/families.hpp"
#include "aafix/kernels.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace aafix;
using namespace aafix::testing;
using Catch::Approx;

namespace {

TwoTimeEnvelope lag_env(double c, double rate = 1.0) {
    return {[c, rate](double t, double s) { return c * std::exp(-rate * std::abs(t - s)); },
            TailBound::exponential(c, rate), "c e^{-|t-s|}"};
}

KernelSpec scalar_kernel(KernelFn f, TwoTimeEnvelope lambda, TwoTimeEnvelope mu) {
    KernelSpec k;
    k.name = "test";
    k.dim = 1;
    k.eval = std::move(f);
    k.lambda = std::move(lambda);
    k.mu = std::move(mu);
    return k;
}

Vec lag_x(double t, double s, const Vec& x) { return std::exp(-(t - s)) * x; }

}  // namespace

TEST_CASE("lambda bound checks", "[kernels]") {
    const SamplePlan plan;
    auto zero = scalar_kernel([](double, double, const Vec& x, const Vec&) { return Vec::Zero(x.size()).eval(); },
                              {[](double, double) { return 1.0; }, TailBound::probe(), "1"}, lag_env(0.0));
    auto r = check_lambda_bound(zero, plan);
    CHECK(r.pass);
    CHECK(r.max_violation == -1.0);

    auto exact = scalar_kernel([](double t, double s, const Vec& x, const Vec&) { return lag_x(t, s, x); },
                               lag_env(1.0), lag_env(1.0));
    r = check_lambda_bound(exact, plan);
    CHECK(r.pass);
    CHECK(r.max_violation == Approx(0.0).margin(1e-13));

    exact.lambda = lag_env(0.5);
    r = check_lambda_bound(exact, plan);
    CHECK_FALSE(r.pass);
    CHECK(r.max_violation == Approx(0.5).margin(1e-12));
    CHECK(r.witness.t == r.witness.s);
    CHECK(r.witness.x.norm() == Approx(1.0));
    CHECK(r.samples > 0);
    CHECK_FALSE(r.plan.empty());
}

TEST_CASE("lambda checks need a nonzero shift", "[kernels]") {
    SamplePlan plan;
    plan.taus = {0.0};
    auto k = scalar_kernel([](double t, double s, const Vec& x, const Vec&) { return lag_x(t, s, x); }, lag_env(1.0),
                           lag_env(1.0));
    CHECK_THROWS_AS(check_lambda_bound(k, plan), Error);
}

TEST_CASE("lambda checks see translation dependence", "[kernels]") {
    // the bound holds at tau = 0 but not after shifting by -5.3, where 2 + sin grows
    auto k = scalar_kernel(
        [](double t, double s, const Vec& x, const Vec&) { return ((2.0 + std::sin(t)) * std::exp(-(t - s)) * x).eval(); },
        {[](double t, double s) { return (2.0 + std::sin(t)) * std::exp(-(t - s)); }, TailBound::exponential(3.0, 1.0),
         "(2+sin t) e^{-(t-s)}"},
        lag_env(3.0));
    CHECK_FALSE(check_lambda_bound(k, SamplePlan{}).pass);
}

TEST_CASE("Lipschitz checks", "[kernels]") {
    const SamplePlan plan;
    auto lin = scalar_kernel([](double t, double s, const Vec& x,
                                const Vec& y) { return (0.25 * std::exp(-(t - s)) * (x + y)).eval(); },
                             lag_env(0.5), lag_env(0.25));
    auto r = check_lipschitz(lin, plan);
    CHECK(r.pass);
    CHECK(r.max_violation == Approx(0.0).margin(1e-15));

    auto flat = scalar_kernel([](double t, double s, const Vec&, const Vec&) { return scalar(std::sin(t - s)); },
                              lag_env(1.0), {[](double, double) { return 0.0; }, TailBound::probe(), "0"});
    CHECK(check_lipschitz(flat, plan).pass);

    auto tight = scalar_kernel([](double t, double s, const Vec& x, const Vec&) { return lag_x(t, s, x); },
                               lag_env(1.0), lag_env(0.5));
    r = check_lipschitz(tight, plan);
    CHECK_FALSE(r.pass);
    CHECK(r.max_violation > 0.0);
    CHECK(std::abs(r.witness.x(0) - r.witness.x2(0)) > 0.0);
}

TEST_CASE("affine kernels pass exactly when mu covers the coefficient", "[kernels][property]") {
    const SamplePlan plan;
    for (double factor : {0.9, 0.999, 1.0, 1.5}) {
        auto k = scalar_kernel(
            [](double t, double s, const Vec& x, const Vec&) {
                return (Vec::Ones(x.size()) + 0.7 * std::exp(-(t - s)) * x).eval();
            },
            lag_env(2.0),
            {[factor](double t, double s) { return factor * 0.7 * std::exp(-(t - s)); },
             TailBound::exponential(0.7 * factor, 1.0), "m"});
        CHECK(check_lipschitz(k, plan).pass == (factor >= 1.0));
    }
}

TEST_CASE("convolution form of the built-in families", "[kernels]") {
    KernelParams kp;
    kp.family = "conv_sinusoid";
    kp.coeff = 0.3;
    kp.rate = 1.5;
    kp.amp = 0.4;
    kp.freq = 2.0;
    kp.wx = 1.0;
    kp.wy = 0.5;
    kp.map = StateMap::tanh;
    const auto k = make_kernel(kp);
    REQUIRE(k.convolution);
    const auto r = check_convolution_form(k, SamplePlan{});
    CHECK(r.pass);
    CHECK(r.max_violation <= 1e-15);
    CHECK(check_lambda_bound(k, SamplePlan{}).pass);
    CHECK(check_lipschitz(k, SamplePlan{}).pass);

    for (const char* family : {"exp_decay", "gauss_decay"}) {
        KernelParams q;
        q.family = family;
        q.coeff = 0.2;
        q.bias = 0.1;
        q.wy = 0.3;
        const auto kk = make_kernel(q);
        CHECK(check_lambda_bound(kk, SamplePlan{}).pass);
        CHECK(check_lipschitz(kk, SamplePlan{}).pass);
    }
    KernelParams bad;
    bad.family = "nope";
    CHECK_THROWS_AS(make_kernel(bad), ConfigError);
}

TEST_CASE("split consistency", "[kernels]") {
    SplitKernelSpec k;
    k.name = "split";
    k.aa_part = scalar_kernel([](double t, double s, const Vec& x, const Vec&) { return lag_x(t, s, x); },
                              lag_env(1.0), lag_env(1.0));
    k.aa_part.orientation = Orientation::half_line_delayed;
    k.ergodic = [](double, double, const Vec& x, const Vec&) { return Vec::Zero(x.size()).eval(); };
    k.theta = {[](double t, double s) { return std::exp(-t) * std::exp(-(t - s)); }, TailBound::exponential(1.0, 1.0),
               "e^{-t} e^{-(t-s)}"};
    k.bhat = [](double, const Vec& x, const Vec&) { return x.norm(); };
    k.mu3 = k.theta;

    auto r = check_split_consistency(k, SamplePlan{});
    CHECK(r.split_residual == 0.0);
    CHECK(r.pass);

    k.ergodic = [](double t, double s, const Vec& x, const Vec&) {
        return (std::exp(-t) * std::exp(-(t - s)) * x).eval();
    };
    k.full = [](double t, double s, const Vec& x, const Vec&) {
        return ((1.0 + std::exp(-t)) * std::exp(-(t - s)) * x).eval();
    };
    r = check_split_consistency(k, SamplePlan{});
    CHECK(r.pass);
    CHECK(r.split_residual <= 1e-15);

    k.full = [](double t, double s, const Vec& x, const Vec&) {
        return ((1.0 + 2.0 * std::exp(-t)) * std::exp(-(t - s)) * x).eval();
    };
    r = check_split_consistency(k, SamplePlan{});
    CHECK_FALSE(r.pass);
    CHECK(r.split_residual > 0.0);
    CHECK(r.split_witness.x.norm() > 0.0);
}

TEST_CASE("built-in split kernels are consistent", "[kernels]") {
    SplitKernelParams p;
    p.aa.orientation = Orientation::half_line_delayed;
    p.aa.coeff = 0.2;
    p.ergodic_coeff = 0.1;
    p.ergodic_bias = 0.05;
    const auto k = make_split_kernel(p);
    CHECK(check_split_consistency(k, SamplePlan{}).pass);
    CHECK(k.total_mu()(1.0, 0.5) >= k.aa_part.mu(1.0, 0.5));
}

TEST_CASE("sample plans are deterministic", "[kernels][property]") {
    const SamplePlan plan;
    const auto a = plan.states(3);
    const auto b = plan.states(3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].first.norm() <= plan.radius * (1.0 + 1e-15));
        CHECK(a[i].second.norm() <= plan.radius * (1.0 + 1e-15));
    }
    for (auto [t, s] : plan.pairs(Orientation::delayed)) CHECK(s <= t);
    for (auto [t, s] : plan.pairs(Orientation::advanced)) CHECK(s >= t);
    for (auto [t, s] : plan.pairs(Orientation::half_line_delayed)) {
        CHECK(s <= t);
        CHECK(s >= 0.0);
    }
}

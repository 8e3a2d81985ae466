#include "aafix/function_space.hpp"
#include "aafix/quadrature.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace aafix;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("finite-interval quadrature", "[quadrature]") {
    CHECK(integrate_interval([](double s) { return std::sin(s); }, 0.0, kPi) == Approx(2.0).margin(1e-12));
    CHECK(integrate_interval([](double s) { return std::exp(s); }, -1.0, 3.0) ==
          Approx(std::exp(3.0) - std::exp(-1.0)).epsilon(1e-13));
    CHECK(integrate_interval([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    const auto r = integrate_interval(
        [](double s) {
            Vec v(2);
            v << s, s * s;
            return v;
        },
        0.0, 3.0);
    CHECK(r.value(0) == Approx(4.5).epsilon(1e-14));
    CHECK(r.value(1) == Approx(9.0).epsilon(1e-14));
    CHECK(r.evaluations > 0);
}

TEST_CASE("delayed semi-infinite integrals", "[quadrature]") {
    const double tol = 1e-10;
    QuadOptions opt;
    opt.tol = tol;
    for (double t : {-7.0, 0.0, 3.3}) {
        const double one = integrate_delayed([t](double s) { return std::exp(-(t - s)); }, t,
                                             TailBound::exponential(1.0, 1.0), opt);
        CHECK(std::abs(one - 1.0) <= tol);
        const double v = integrate_delayed([t](double s) { return std::exp(-2 * (t - s)) * std::sin(s); }, t,
                                           TailBound::exponential(1.0, 2.0), opt);
        CHECK(std::abs(v - (2 * std::sin(t) - std::cos(t)) / 5.0) <= tol);
    }
    const double at0 = integrate_delayed([](double s) { return std::exp(2 * s) * std::sin(s); }, 0.0,
                                         TailBound::exponential(1.0, 2.0), opt);
    CHECK(std::abs(at0 + 0.2) <= tol);
    CHECK(integrate_delayed([](double) { return 0.0; }, 1.0, TailBound::exponential(1.0, 1.0), opt) == 0.0);
}

TEST_CASE("advanced semi-infinite integrals", "[quadrature]") {
    const double tol = 1e-10;
    QuadOptions opt;
    opt.tol = tol;
    for (double t : {-4.0, 0.0, 11.5}) {
        const double half = integrate_advanced([t](double s) { return std::exp(-2 * (s - t)); }, t,
                                               TailBound::exponential(1.0, 2.0), opt);
        CHECK(std::abs(half - 0.5) <= tol);
        const double v = integrate_advanced([t](double s) { return std::exp(-(s - t)) * std::cos(s); }, t,
                                            TailBound::exponential(1.0, 1.0), opt);
        CHECK(std::abs(v - (std::cos(t) - std::sin(t)) / 2.0) <= tol);
    }
    CHECK(integrate_advanced([](double) { return 0.0; }, 0.0, TailBound::exponential(1.0, 1.0), opt) == 0.0);
}

TEST_CASE("gaussian and probe tails", "[quadrature]") {
    QuadOptions opt;
    opt.tol = 1e-10;
    const double g = integrate_delayed([](double s) { return std::exp(-s * s); }, 0.0, TailBound::gaussian(1.0, 1.0), opt);
    CHECK(g == Approx(std::sqrt(kPi) / 2.0).margin(1e-10));
    const double p = integrate_advanced([](double s) { return std::exp(-s * s); }, 0.0, TailBound::probe(), opt);
    CHECK(p == Approx(std::sqrt(kPi) / 2.0).margin(1e-9));
}

TEST_CASE("tail bounds", "[quadrature]") {
    const auto e = TailBound::exponential(2.0, 0.5);
    CHECK(e.bound(0.0) == 2.0);
    CHECK(e.tail_integral(0.0) == Approx(4.0));
    for (double eps : {1e-3, 1e-8, 1e-12}) CHECK(e.tail_integral(e.truncation(eps)) == Approx(eps).epsilon(1e-9));
    const auto g = TailBound::gaussian(1.0, 2.0);
    for (double eps : {1e-4, 1e-10}) CHECK(g.tail_integral(g.truncation(eps)) <= eps * (1.0 + 1e-9));
    CHECK_THROWS_AS(TailBound::probe().truncation(1e-6), Error);
    CHECK_THROWS_AS(TailBound::exponential(1.0, 0.0), Error);
}

TEST_CASE("a tail that does not dominate is reported as divergence", "[quadrature]") {
    TwoTimeEnvelope env{[](double t, double s) { return std::exp(-0.1 * (t - s)); }, TailBound::exponential(1.0, 5.0),
                        "slow"};
    CHECK_THROWS_AS(envelope_constant(env, Orientation::delayed, {0.0}), DivergenceError);
}

TEST_CASE("envelope constants", "[quadrature]") {
    std::vector<double> grid = uniform_grid(-6.0, 6.0, 0.25);
    grid.push_back(kPi / 2);
    std::sort(grid.begin(), grid.end());

    TwoTimeEnvelope e1{[](double t, double s) { return std::exp(-(t - s)); }, TailBound::exponential(1.0, 1.0), "e"};
    auto v = envelope_constant(e1, Orientation::delayed, grid);
    CHECK(v.value == Approx(1.0).margin(1e-9));
    CHECK(v.grid_points == grid.size());
    CHECK(v.computed);

    TwoTimeEnvelope e2{[](double t, double s) { return std::exp(-(t - s)) * (2 + std::sin(t)) / 3; },
                       TailBound::exponential(1.0, 1.0), "periodic"};
    v = envelope_constant(e2, Orientation::delayed, grid);
    CHECK(v.value == Approx(1.0).margin(1e-9));
    CHECK(std::remainder(v.argmax - kPi / 2, 2 * kPi) == Approx(0.0).margin(1e-12));

    TwoTimeEnvelope e3{[](double t, double s) { return std::exp(-2 * (s - t)); }, TailBound::exponential(1.0, 2.0),
                       "adv"};
    CHECK(envelope_constant(e3, Orientation::advanced, grid).value == Approx(0.5).margin(1e-9));

    TwoTimeEnvelope e4{[](double t, double s) { return std::exp(-(t - s)); }, TailBound::exponential(1.0, 1.0), "h"};
    const auto h = envelope_constant(e4, Orientation::half_line_delayed, uniform_grid(0.0, 8.0, 0.5));
    CHECK(h.value == Approx(1.0 - std::exp(-8.0)).margin(1e-9));
    CHECK(h.argmax == 8.0);
}

TEST_CASE("envelope constants are monotone in the grid", "[quadrature][property]") {
    TwoTimeEnvelope env{[](double t, double s) { return std::exp(-(t - s)) * (1.5 + std::cos(0.7 * t) * std::sin(s)); },
                        TailBound::exponential(2.5, 1.0), "mixed"};
    std::vector<double> grid{0.0};
    double last = envelope_constant(env, Orientation::delayed, grid).value;
    for (double t : {3.1, -2.2, 7.7, 1.4, -5.0, 4.4}) {
        grid.push_back(t);
        const double now = envelope_constant(env, Orientation::delayed, grid).value;
        CHECK(now >= last);
        last = now;
    }
}

TEST_CASE("quadrature is linear in the integrand", "[quadrature][property]") {
    QuadOptions opt;
    opt.tol = 1e-10;
    const auto tail = TailBound::exponential(2.0, 1.0);
    auto g1 = [](double s) { return std::exp(s) * std::cos(3 * s); };
    auto g2 = [](double s) { return std::exp(s) * (0.5 + std::sin(s)); };
    for (double t : {-1.0, 0.0, 2.0}) {
        auto sh = [t](auto g) { return [g, t](double s) { return g(s) * std::exp(-t); }; };
        const double a = integrate_delayed(sh(g1), t, tail, opt);
        const double b = integrate_delayed(sh(g2), t, tail, opt);
        const double c = integrate_delayed([&](double s) { return sh(g1)(s) + sh(g2)(s); }, t,
                                           TailBound::exponential(3.5, 1.0), opt);
        CHECK(std::abs(c - (a + b)) <= 2 * opt.tol);
    }
}

TEST_CASE("tighter tolerances never lose accuracy on the oracle battery", "[quadrature][property]") {
    struct Oracle {
        std::function<double(double)> g;
        TailBound tail;
        double exact;
    };
    const std::vector<Oracle> battery{
        {[](double s) { return std::exp(2 * s) * std::sin(s); }, TailBound::exponential(1.0, 2.0), -0.2},
        {[](double s) { return std::exp(s); }, TailBound::exponential(1.0, 1.0), 1.0},
        {[](double s) { return std::exp(-s * s); }, TailBound::gaussian(1.0, 1.0), std::sqrt(kPi) / 2},
        {[](double s) { return std::exp(0.5 * s) * std::cos(2 * s); }, TailBound::exponential(1.0, 0.5),
         0.5 / (0.25 + 4.0)},
    };
    for (const auto& o : battery) {
        double prev = std::numeric_limits<double>::infinity();
        for (double tol : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
            QuadOptions opt;
            opt.tol = tol;
            const double err = std::abs(integrate_delayed(o.g, 0.0, o.tail, opt) - o.exact);
            CHECK(err <= tol);
            CHECK(err <= std::max(prev, 1e-15));
            prev = err;
        }
    }
}

TEST_CASE("limit trends", "[quadrature]") {
    const auto r = limit_trend([](double t) { return std::exp(-t); }, {1.0, 5.0, 10.0, 20.0}, 1e-6);
    CHECK(r.non_increasing);
    CHECK(r.below_tol);
    CHECK(r.last == std::exp(-20.0));
    const auto s = limit_trend([](double t) { return std::abs(std::sin(t)); }, {1.0, 2.0, 4.0}, 1e-6);
    CHECK_FALSE(s.below_tol);
}

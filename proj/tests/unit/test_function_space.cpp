#include "aafix/families.hpp"
#include "aafix/function_space.hpp"
#include "aafix/path_csv.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

using namespace aafix;
using namespace aafix::testing;
using Catch::Approx;

TEST_CASE("sup_norm of simple paths", "[function_space]") {
    const auto grid = uniform_grid(-5.0, 5.0, 0.1);
    CHECK(sup_norm(scalar_path(grid, [](double) { return 0.0; })) == 0.0);

    std::vector<double> g{0.0, 0.5, std::numbers::pi / 2, 2.0, 3.0};
    CHECK(sup_norm(scalar_path(g, [](double t) { return std::sin(t); })) == 1.0);

    const auto two = SampledPath::from_function(DomainKind::full_line, grid, [](double t) {
        Vec v(2);
        v << std::cos(t), std::sin(t);
        return v;
    });
    CHECK(sup_norm(two) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sup_norm of psi matches a dense-sampling oracle", "[function_space]") {
    // 1/(2 + cos t + cos sqrt2 t) is unbounded on R, so psi sweeps all of [-1, 1]
    double oracle = 0.0;
    for (long i = -10'000'000; i <= 10'000'000; ++i) oracle = std::max(oracle, std::abs(psi(1e-3 * i)));
    const auto p = scalar_path(uniform_grid(-1e4, 1e4, 0.01), psi);
    const double s = sup_norm(p);
    CHECK(s <= oracle);
    CHECK(s > 0.999);
    CHECK(oracle > 0.9999);
}

TEST_CASE("sup_norm is a norm on shared grids", "[function_space][property]") {
    const auto grid = uniform_grid(-10.0, 10.0, 0.05);
    const auto p = scalar_path(grid, [](double t) { return std::sin(t) + 0.3 * std::cos(3 * t); });
    const auto q = scalar_path(grid, [](double t) { return std::exp(-t * t) - 0.5; });
    for (double c : {-3.0, -0.5, 0.0, 0.25, 2.0}) {
        const auto scaled = SampledPath(DomainKind::full_line, grid, c * p.values());
        CHECK(sup_norm(scaled) == Approx(std::abs(c) * sup_norm(p)).epsilon(1e-15).margin(1e-300));
    }
    CHECK(sup_norm(axpy(p, 1.0, q)) <= sup_norm(p) + sup_norm(q));
    CHECK(sup_distance(p, q) == sup_norm(axpy(p, -1.0, q)));
}

TEST_CASE("aaa_norm sums the component sup-norms", "[function_space]") {
    const auto full = uniform_grid(-20.0, 20.0, 0.01);
    const auto half = uniform_grid(0.0, 20.0, 0.01);
    AAADecomposition zero{scalar_path(full, [](double) { return 0.0; }),
                          scalar_path(half, [](double) { return 0.0; }, DomainKind::half_line)};
    CHECK(aaa_norm(zero) == 0.0);

    AAADecomposition g{scalar_path(full, [](double t) { return std::sin(t); }),
                       scalar_path(half, [](double t) { return std::exp(-t); }, DomainKind::half_line)};
    CHECK(aaa_norm(g) == Approx(2.0).margin(1e-4));

    const auto wide = uniform_grid(-1e4, 1e4, 0.01);
    AAADecomposition h{scalar_path(wide, psi),
                       scalar_path(half, [](double t) { return std::exp(-2 * t); }, DomainKind::half_line)};
    const double psi_sup = sup_norm(h.principal);
    CHECK(aaa_norm(h) == Approx(psi_sup + 1.0).epsilon(1e-15));
}

TEST_CASE("aaa_norm dominates the recombined path", "[function_space][property]") {
    const auto half = uniform_grid(0.0, 30.0, 0.02);
    for (double w : {0.5, 1.0, 2.3}) {
        const auto f = scalar_path(half, [&](double t) { return std::sin(w * t) + 0.2 * std::cos(t); });
        const auto phi = scalar_path(half, [&](double t) { return -1.5 * std::exp(-w * t); }, DomainKind::half_line);
        CHECK(aaa_norm({f, phi}) >= sup_norm(axpy(f, 1.0, phi)));
    }
}

TEST_CASE("evaluate interpolates and is exact at nodes", "[function_space]") {
    Mat v(1, 2);
    v << 0.0, 2.0;
    const SampledPath lin(DomainKind::full_line, {0.0, 1.0}, v, Interpolation::linear);
    CHECK(lin.evaluate(0.5)(0) == 1.0);

    const auto grid = uniform_grid(-3.0, 3.0, 0.37);
    const auto p = scalar_path(grid, [](double t) { return std::sin(3 * t) + t * t; });
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.evaluate(grid[i])(0) == p.value(i)(0));

    Vec c(3);
    c << 1.5, -2.0, 0.25;
    const auto k = SampledPath::constant(DomainKind::full_line, grid, c);
    for (double t : {-100.0, -1.234, 0.0, 2.99, 50.0}) CHECK(k.evaluate(t) == c);
}

TEST_CASE("cubic interpolation of a smooth path", "[function_space]") {
    const auto grid = uniform_grid(0.0, 10.0, 0.05);
    const auto p = scalar_path(grid, [](double t) { return std::sin(t); });
    double err = 0.0;
    for (double t = 0.01; t < 10.0; t += 0.013) err = std::max(err, std::abs(p.evaluate(t)(0) - std::sin(t)));
    CHECK(err < 1e-6);
}

TEST_CASE("tail policies", "[function_space]") {
    const auto grid = uniform_grid(0.0, 1.0, 0.1);
    const auto p = scalar_path(grid, [](double t) { return 1.0 + t; }, DomainKind::full_line, TailPolicy::error());
    CHECK_THROWS_AS(p.evaluate(2.0), DomainError);
    CHECK(p.evaluate(1.05)(0) == 2.0);  // within one grid step
    CHECK(p.with_tail(TailPolicy::constant_extend()).evaluate(5.0)(0) == 2.0);
    const auto d = p.with_tail(TailPolicy::decay_to_anchor(1.0));
    CHECK(d.evaluate(3.0)(0) == Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("malformed paths are rejected", "[function_space]") {
    Mat v = Mat::Zero(1, 3);
    CHECK_THROWS_AS(SampledPath(DomainKind::full_line, {0.0, 0.0, 1.0}, v), Error);
    CHECK_THROWS_AS(SampledPath(DomainKind::full_line, {0.0, 1.0}, v), Error);
    v(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(SampledPath(DomainKind::full_line, {0.0, 1.0, 2.0}, v), Error);
    CHECK_THROWS_AS(SampledPath(DomainKind::full_line, {}, Mat(1, 0)), Error);
}

TEST_CASE("warp_compose", "[function_space]") {
    const auto grid = uniform_grid(-10.0, 10.0, 0.1);
    const auto p = scalar_path(grid, [](double t) { return std::cos(t) * std::exp(-0.01 * t * t); });
    const auto same = warp_compose(p, TimeWarp::identity());
    CHECK(same.grid_vector() == p.grid_vector());
    CHECK(same.values() == p.values());

    const auto lin = scalar_path(grid, [](double t) { return t; });
    const auto inner = uniform_grid(-5.0, 5.0, 0.1);
    const auto shifted = warp_compose(lin, TimeWarp::shift(1.0), inner);
    for (std::size_t i = 0; i < shifted.size(); ++i)
        CHECK(shifted.value(i)(0) == Approx(inner[i] + 1.0).margin(1e-12));

    const double tau = std::numbers::pi;
    const auto delayed = warp_compose(p, TimeWarp::shift(-tau), inner);
    for (std::size_t i = 0; i < delayed.size(); ++i) CHECK(delayed.value(i)(0) == p.evaluate(inner[i] - tau)(0));

    CHECK_THROWS_AS(warp_compose(p.with_tail(TailPolicy::error()), TimeWarp::shift(5.0)), DomainError);
}

TEST_CASE("range_epsilon_net", "[function_space]") {
    const auto grid = uniform_grid(-20.0, 20.0, 0.01);
    Vec c(2);
    c << 0.3, -0.7;
    CHECK(range_epsilon_net(SampledPath::constant(DomainKind::full_line, grid, c), 0.01).size() == 1);

    const auto circle = SampledPath::from_function(DomainKind::full_line, grid, [](double t) {
        Vec v(2);
        v << std::cos(t), std::sin(t);
        return v;
    });
    CHECK(range_epsilon_net(circle, 2.1).size() == 1);
    CHECK_THROWS_AS(range_epsilon_net(circle, 0.0), Error);
}

TEST_CASE("range_epsilon_net covers every sample", "[function_space][property]") {
    const auto grid = uniform_grid(-30.0, 30.0, 0.05);
    const auto p = SampledPath::from_function(DomainKind::full_line, grid, [](double t) {
        Vec v(3);
        v << std::cos(t), std::sin(t), std::cos(std::sqrt(2.0) * t);
        return v;
    });
    for (double eps : {0.5, 0.1, 0.03}) {
        const auto net = range_epsilon_net(p, eps);
        double worst = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : net.points) best = std::min(best, (p.value(i) - q).norm());
            worst = std::max(worst, best);
        }
        CHECK(worst <= eps);
        CHECK(net.covering_radius == Approx(worst).margin(1e-15));
        CHECK(net.source_index.front() < p.size());
    }
}

TEST_CASE("range_epsilon_net of psi stabilises over growing windows", "[function_space]") {
    std::vector<std::size_t> sizes;
    for (double W : {1e2, 1e3, 1e4}) {
        const auto g = uniform_grid(-W, W, 0.01);
        Mat v(1, static_cast<Eigen::Index>(g.size()));
        for (std::size_t i = 0; i < g.size(); ++i) v(0, static_cast<Eigen::Index>(i)) = psi(g[i]);
        sizes.push_back(range_epsilon_net(v, 0.01).size());
    }
    CHECK(sizes[1] == sizes[2]);
    CHECK(sizes[0] <= sizes[1]);
}

TEST_CASE("path CSV round trip is exact", "[function_space]") {
    const auto grid = uniform_grid(-2.0, 2.0, 0.1);
    const auto p = SampledPath::from_function(DomainKind::full_line, grid, [](double t) {
        Vec v(2);
        v << std::sin(t) / 3.0, std::exp(t) * 1e-17;
        return v;
    });
    std::stringstream s;
    write_path_csv(s, p);
    const auto q = read_path_csv(s);
    CHECK(q.grid_vector() == p.grid_vector());
    CHECK(q.values() == p.values());
    for (double x : {0.1, 1.0 / 3.0, -2.5e-310, 6.02214076e23}) CHECK(parse_double(format_double(x)) == x);

    std::stringstream bad("t,v1\n0,1\n1,abc\n");
    CHECK_THROWS_AS(read_path_csv(bad), Error);
    std::stringstream header("time,v1\n0,1\n");
    CHECK_THROWS_AS(read_path_csv(header), Error);
}

#include "aafix/families.hpp"
#include "aafix/operators.hpp"
#include "aafix/quadrature.hpp"
#include "aafix/resolvent.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace aafix;

static void BM_DelayedQuadrature(benchmark::State& state) {
    QuadOptions opt;
    opt.tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    const auto tail = TailBound::exponential(1.0, 2.0);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            integrate_delayed([t](double s) { return std::exp(-2 * (t - s)) * std::sin(s); }, t, tail, opt));
        t += 0.1;
    }
}
BENCHMARK(BM_DelayedQuadrature)->DenseRange(6, 12, 2);

static void BM_ApplyGamma(benchmark::State& state) {
    ProblemSpec s;
    s.variant = Variant::delayed_only;
    NonlinearityParams np;
    np.forcing.kind = Forcing::Kind::sin;
    s.f = make_nonlinearity(np);
    KernelParams kp;
    kp.coeff = 0.25;
    kp.rate = 2.0;
    s.c1 = make_kernel(kp);
    s.t_min = -static_cast<double>(state.range(0));
    s.t_max = static_cast<double>(state.range(0));
    s.quad_tol = 1e-8;
    const SampledPath y = SampledPath::from_function(DomainKind::full_line, s.grid(), [](double t) {
        Vec v(1);
        v(0) = std::sin(t);
        return v;
    });
    for (auto _ : state) benchmark::DoNotOptimize(apply_gamma(s, y));
    state.SetComplexityN(static_cast<benchmark::IterationCount>(y.size()));
}
BENCHMARK(BM_ApplyGamma)->RangeMultiplier(2)->Range(5, 40)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_BuildResolvent(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Mat A = -2.0 * Mat::Identity(d, d) + 0.1 * Mat::Ones(d, d);
    ResolventOptions opt;
    opt.t_max = 5.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_resolvent(A, [d](double t) { return Mat(-0.25 * std::exp(-t) * Mat::Identity(d, d)); }, opt));
}
BENCHMARK(BM_BuildResolvent)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

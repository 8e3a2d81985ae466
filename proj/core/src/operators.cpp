#include "aafix/operators.hpp"

#include "aafix/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace aafix {

namespace {

// Bound on |C(t,s,y(s),y(a(s)))| given |C(t,s,0,0)| <= lambda and the
// Lipschitz modulus mu, for iterates of sup-norm ynorm.
TailBound integrand_tail(const TailBound& lambda, const TailBound& mu, double ynorm) {
    if (lambda.kind == TailBound::Kind::probe || mu.kind == TailBound::Kind::probe) return TailBound::probe();
    if (lambda.kind != mu.kind || lambda.rate != mu.rate) return TailBound::probe();
    TailBound out = lambda;
    out.c = lambda.c + 2.0 * ynorm * mu.c;
    if (out.c == 0.0) out.c = 1e-300;
    return out;
}

QuadOptions quad_options(const ProblemSpec& spec) {
    QuadOptions q;
    q.tol = spec.quad_tol;
    return q;
}

SampledPath on_grid(const ProblemSpec& spec, const SampledPath& y) {
    const auto grid = spec.grid();
    if (y.grid_vector() == grid) return as_iterate(y);
    return as_iterate(SampledPath::from_function(spec.domain(), grid, [&](double t) { return y.evaluate(t); }));
}

SampledPath sampled(const ProblemSpec& spec, std::vector<double> grid, Mat values) {
    return SampledPath(spec.domain(), std::move(grid), std::move(values), Interpolation::cubic,
                       TailPolicy::constant_extend());
}

}  // namespace

SampledPath as_iterate(const SampledPath& p) {
    if (p.tail().kind == TailKind::constant_extend) return p;
    return p.with_tail(TailPolicy::constant_extend());
}

SampledPath zero_path(const ProblemSpec& spec) {
    return SampledPath::constant(spec.domain(), spec.grid(), Vec::Zero(spec.dim));
}

SampledPath apply_gamma(const ProblemSpec& spec, const SampledPath& y_in) {
    if (spec.variant != Variant::advanced_delayed && spec.variant != Variant::delayed_only)
        throw Error("apply_gamma: variant " + to_string(spec.variant) + " is not a full-line integral equation");
    const SampledPath y = on_grid(spec, y_in);
    const auto grid = spec.grid();
    const double ynorm = sup_norm(y);
    const QuadOptions qo = quad_options(spec);
    const KernelSpec* c1 = spec.c1 ? &*spec.c1 : nullptr;
    const KernelSpec* c2 = (spec.variant == Variant::advanced_delayed && spec.c2) ? &*spec.c2 : nullptr;
    const TailBound tail1 = c1 ? integrand_tail(c1->lambda.tail, c1->mu.tail, ynorm) : TailBound{};
    const TailBound tail2 = c2 ? integrand_tail(c2->lambda.tail, c2->mu.tail, ynorm) : TailBound{};

    Mat out(spec.dim, static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        Vec v = spec.f(t, y.value(i), y.evaluate(spec.a0(t)));
        if (c1) {
            v += integrate_delayed([&](double s) { return (*c1)(t, s, y.evaluate(s), y.evaluate(spec.a1(s))); }, t,
                                   tail1, qo)
                     .value;
        }
        if (c2) {
            v += integrate_advanced([&](double s) { return (*c2)(t, s, y.evaluate(s), y.evaluate(spec.a2(s))); }, t,
                                    tail2, qo)
                     .value;
        }
        out.col(static_cast<Eigen::Index>(i)) = v;
    }
    return sampled(spec, grid, std::move(out));
}

SampledPath apply_pi(const ProblemSpec& spec, const SampledPath& y_in) {
    if (spec.variant != Variant::half_line) throw Error("apply_pi: variant must be half_line");
    const SampledPath y = on_grid(spec, y_in);
    const auto grid = spec.grid();
    const double ynorm = sup_norm(y);
    const QuadOptions qo = quad_options(spec);
    TailBound tail2;
    if (spec.b2) {
        const Vec z = Vec::Zero(spec.dim);
        const double bhat0 = spec.b2->bhat ? spec.b2->bhat(0.0, z, z) : 0.0;
        tail2 = integrand_tail(spec.b2->total_lambda(bhat0).tail, spec.b2->total_mu().tail, ynorm);
    }

    Mat out(spec.dim, static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        Vec v = spec.f(t, y.value(i), y.evaluate(std::max(0.0, spec.a0(t))));
        if (spec.b1 && t > 0.0) {
            const auto& b1 = *spec.b1;
            v += integrate_interval(
                     [&](double s) { return b1(t, s, y.evaluate(s), y.evaluate(std::max(0.0, spec.a1(s)))); }, 0.0,
                     t, qo)
                     .value;
        }
        if (spec.b2) {
            const auto& b2 = *spec.b2;
            v += integrate_advanced(
                     [&](double s) { return b2(t, s, y.evaluate(s), y.evaluate(std::max(0.0, spec.a2(s)))); }, t,
                     tail2, qo)
                     .value;
        }
        out.col(static_cast<Eigen::Index>(i)) = v;
    }
    return sampled(spec, grid, std::move(out));
}

SampledPath causal_apply(const ProblemSpec& spec, const SampledPath& u_in) {
    const auto grid = spec.grid();
    Mat out = Mat::Zero(spec.dim, static_cast<Eigen::Index>(grid.size()));
    if (spec.causal.present()) {
        const SampledPath u = on_grid(spec, u_in);
        const QuadOptions qo = quad_options(spec);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            if (t <= 0.0) continue;
            out.col(static_cast<Eigen::Index>(i)) =
                integrate_interval([&](double s) { return Vec(spec.causal.kernel(t, s) * u.evaluate(s)); }, 0.0, t, qo)
                    .value;
        }
    }
    return sampled(spec, grid, std::move(out));
}

SampledPath apply_mild_evolution(const ProblemSpec& spec, const SampledPath& y_in) {
    const SampledPath y = on_grid(spec, y_in);
    const auto grid = spec.grid();
    const int d = spec.dim;
    const Vec zero = Vec::Zero(d);

    switch (spec.variant) {
        case Variant::evolution_nonlocal: {
            if (!spec.family) throw Error("apply_mild_evolution: evolution family missing");
            const SampledPath By = causal_apply(spec, y);
            const Vec w0 = spec.initial_state() + spec.g(y, d);
            auto h = [&](double r) { return spec.f(r, y.evaluate(r), By.evaluate(r)); };
            Mat out = spec.family->propagate_forced(0.0, w0, grid, h);
            return sampled(spec, grid, std::move(out));
        }
        case Variant::resolvent_nonlocal: {
            if (!spec.resolvent) throw Error("apply_mild_evolution: resolvent missing");
            const auto& R = *spec.resolvent;
            const Vec w0 = spec.initial_state() + spec.g(y, d);
            const QuadOptions qo = quad_options(spec);
            Mat out(d, static_cast<Eigen::Index>(grid.size()));
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double t = grid[i];
                Vec v = R.at(t) * w0;
                if (t > 0.0) {
                    v += integrate_interval(
                             [&](double s) { return Vec(R.at(t - s) * spec.f(s, y.evaluate(s), zero)); }, 0.0, t, qo)
                             .value;
                }
                out.col(static_cast<Eigen::Index>(i)) = v;
            }
            return sampled(spec, grid, std::move(out));
        }
        case Variant::delay_parabolic: {
            if (!spec.family) throw Error("apply_mild_evolution: evolution family missing");
            const auto [M, delta] = spec.stability_constants();
            const double tau = spec.delay_tau;
            auto h = [&](double r) { return spec.f(r, y.evaluate(r - tau), zero); };
            // start far enough back that the discarded history is below quad_tol
            double H = spec.f.forcing.sup_bound() * std::sqrt(static_cast<double>(d));
            for (double t : grid) H = std::max(H, spec.f(t, zero, zero).norm());
            const double ynorm = sup_norm(y);
            if (ynorm > 0.0) {
                const bool declared = spec.f.lipschitz || spec.f.lipschitz_curve;
                H += declared ? spec.f.lipschitz_on(ynorm) * ynorm : 0.0;
                for (std::size_t i = 0; !declared && i < grid.size(); ++i)
                    H = std::max(H, spec.f(grid[i], y.value(i), zero).norm());
            }
            H = std::max(H, 1e-300);
            const double warm = std::max(0.0, std::log(M * H / (delta * spec.quad_tol)) / delta);
            Mat out = spec.family->propagate_forced(grid.front() - warm, zero, grid, h);
            return sampled(spec, grid, std::move(out));
        }
        default: break;
    }
    throw Error("apply_mild_evolution: variant " + to_string(spec.variant) + " has no mild form");
}

SampledPath apply_operator(const ProblemSpec& spec, const SampledPath& y) {
    switch (spec.variant) {
        case Variant::advanced_delayed:
        case Variant::delayed_only: return apply_gamma(spec, y);
        case Variant::half_line: return apply_pi(spec, y);
        default: return apply_mild_evolution(spec, y);
    }
}

SampledPath compute_base_point(const ProblemSpec& spec) { return apply_operator(spec, zero_path(spec)); }

double residual(const ProblemSpec& spec, const SampledPath& y) {
    const SampledPath yy = on_grid(spec, y);
    return sup_distance(yy, apply_operator(spec, yy));
}

}  // namespace aafix

#include "aafix/kernels.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace aafix {

namespace {

constexpr std::array<int, 24> primes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                        41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double radical_inverse(int index, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (index > 0) {
        r += f * (index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

double pair_norm(const Vec& a, const Vec& b) { return a.norm() + b.norm(); }

}  // namespace

double rounding_slack(double scale) { return 1e-12 * std::max(1.0, std::abs(scale)); }

Vec KernelSpec::at_zero(double t, double s) const {
    const Vec z = Vec::Zero(dim);
    return eval(t, s, z, z);
}

Vec SplitKernelSpec::operator()(double t, double s, const Vec& x, const Vec& y) const {
    if (full) return full(t, s, x, y);
    if (!ergodic) return aa_part.eval(t, s, x, y);
    return aa_part.eval(t, s, x, y) + ergodic(t, s, x, y);
}

TwoTimeEnvelope SplitKernelSpec::total_mu() const {
    TwoTimeEnvelope nu = aa_part.mu, m3 = mu3;
    TwoTimeEnvelope out;
    out.fn = [nu, m3](double t, double s) { return nu(t, s) + (m3 ? m3(t, s) : 0.0); };
    out.tail = nu.tail;
    if (m3 && nu.tail.kind != TailBound::Kind::probe && m3.tail.kind == nu.tail.kind && nu.tail.rate == m3.tail.rate)
        out.tail.c = nu.tail.c + m3.tail.c;
    else if (m3)
        out.tail = TailBound::probe();
    out.label = "nu+mu3";
    return out;
}

TwoTimeEnvelope SplitKernelSpec::total_lambda(double bhat_sup) const {
    TwoTimeEnvelope la = aa_part.lambda, th = theta;
    TwoTimeEnvelope out;
    out.fn = [la, th, bhat_sup](double t, double s) { return la(t, s) + (th ? bhat_sup * th(t, s) : 0.0); };
    out.tail = TailBound::probe();
    if (th && la.tail.kind == TailBound::Kind::exponential && th.tail.kind == TailBound::Kind::exponential &&
        la.tail.rate == th.tail.rate)
        out.tail = TailBound::exponential(la.tail.c + bhat_sup * th.tail.c, la.tail.rate);
    out.label = "lambda+theta*bhat";
    return out;
}

KernelSpec as_kernel(const SplitKernelSpec& k, double bhat_sup) {
    KernelSpec out = k.aa_part;
    out.name = k.name;
    const SplitKernelSpec copy = k;
    out.eval = [copy](double t, double s, const Vec& x, const Vec& y) { return copy(t, s, x, y); };
    out.mu = k.total_mu();
    out.lambda = k.total_lambda(bhat_sup);
    out.convolution.reset();
    out.limit_mu.reset();
    return out;
}

std::string SamplePlan::describe() const {
    std::ostringstream s;
    s << "taus=" << taus.size() << " times=" << times.size() << " lags=" << lags.size()
      << " states=" << state_samples << " radius=" << radius;
    return s.str();
}

std::vector<std::pair<double, double>> SamplePlan::pairs(Orientation o) const {
    std::vector<std::pair<double, double>> out;
    for (double t : times)
        for (double lag : lags) {
            switch (o) {
                case Orientation::delayed: out.emplace_back(t, t - lag); break;
                case Orientation::advanced: out.emplace_back(t, t + lag); break;
                case Orientation::half_line_delayed: {
                    const double tt = std::abs(t);
                    if (tt - lag >= 0.0) out.emplace_back(tt, tt - lag);
                    break;
                }
            }
        }
    return out;
}

std::vector<std::pair<Vec, Vec>> SamplePlan::states(int dim) const {
    std::vector<std::pair<Vec, Vec>> out;
    const Vec z = Vec::Zero(dim);
    out.emplace_back(z, z);
    for (int k = 0; k < dim; ++k) {
        Vec e = Vec::Zero(dim);
        e(k) = radius;
        out.emplace_back(e, z);
        out.emplace_back(z, e);
        out.emplace_back(e, e);
        out.emplace_back(-e, e);
    }
    const double scale = radius / std::sqrt(static_cast<double>(dim));
    for (int i = 1; i <= state_samples; ++i) {
        Vec x(dim), y(dim);
        for (int k = 0; k < dim; ++k) {
            const auto bx = primes[static_cast<std::size_t>((2 * k) % static_cast<int>(primes.size()))];
            const auto by = primes[static_cast<std::size_t>((2 * k + 1) % static_cast<int>(primes.size()))];
            x(k) = scale * (2.0 * radical_inverse(i, bx) - 1.0);
            y(k) = scale * (2.0 * radical_inverse(i, by) - 1.0);
        }
        out.emplace_back(std::move(x), std::move(y));
    }
    return out;
}

KernelCheckReport check_lambda_bound(const KernelSpec& k, const SamplePlan& plan) {
    bool shifted = false;
    for (double tau : plan.taus) shifted = shifted || tau != 0.0;
    if (!shifted) throw Error("check_lambda_bound: sample plan must include a nonzero shift");
    if (!k.lambda) throw Error("check_lambda_bound: kernel " + k.name + " has no envelope");
    KernelCheckReport r;
    r.check = "lambda_bound";
    r.plan = plan.describe();
    const auto states = plan.states(k.dim);
    bool ok = true;
    for (auto [t, s] : plan.pairs(k.orientation)) {
        const double lam = k.lambda(t, s);
        for (double tau : plan.taus) {
            if (k.orientation == Orientation::half_line_delayed && s + tau < 0.0) continue;
            for (const auto& [x, y] : states) {
                const double v = k.eval(t + tau, s + tau, x, y).norm() - lam;
                ++r.samples;
                if (v > rounding_slack(lam)) ok = false;
                if (v > r.max_violation) {
                    r.max_violation = v;
                    r.witness = {tau, t, s, x, y, {}, {}};
                }
            }
        }
    }
    r.pass = ok;
    return r;
}

namespace {

KernelCheckReport lipschitz_scan(const KernelFn& c, int dim, Orientation o, const TwoTimeEnvelope& mu,
                                 const SamplePlan& plan, const std::string& label) {
    KernelCheckReport r;
    r.check = label;
    r.plan = plan.describe();
    const auto states = plan.states(dim);
    bool ok = true;
    for (auto [t, s] : plan.pairs(o)) {
        const double m = mu(t, s);
        for (std::size_t i = 0; i < states.size(); ++i) {
            // each state against its successor and against the origin
            for (std::size_t j : {(i + 1) % states.size(), std::size_t{0}}) {
                if (j == i) continue;
                const auto& [x1, y1] = states[i];
                const auto& [x2, y2] = states[j];
                const double dist = (x1 - x2).norm() + (y1 - y2).norm();
                const double v = (c(t, s, x1, y1) - c(t, s, x2, y2)).norm() - m * dist;
                ++r.samples;
                if (v > rounding_slack(m * dist + pair_norm(x1, y1))) ok = false;
                if (v > r.max_violation) {
                    r.max_violation = v;
                    r.witness = {0.0, t, s, x1, y1, x2, y2};
                }
            }
        }
    }
    r.pass = ok;
    return r;
}

}  // namespace

KernelCheckReport check_lipschitz(const KernelSpec& k, const SamplePlan& plan) {
    if (!k.mu) throw Error("check_lipschitz: kernel " + k.name + " has no Lipschitz modulus");
    return lipschitz_scan(k.eval, k.dim, k.orientation, k.mu, plan, "lipschitz");
}

KernelCheckReport check_limit_lipschitz(const KernelSpec& k, const KernelFn& limit_kernel, const SamplePlan& plan) {
    if (!k.limit_mu || !limit_kernel) {
        KernelCheckReport r;
        r.check = "limit_lipschitz";
        r.max_violation = 0.0;
        r.pass = true;
        r.note = "not checked";
        return r;
    }
    return lipschitz_scan(limit_kernel, k.dim, k.orientation, *k.limit_mu, plan, "limit_lipschitz");
}

KernelCheckReport check_convolution_form(const KernelSpec& k, const SamplePlan& plan) {
    KernelCheckReport r;
    r.check = "convolution_form";
    r.plan = plan.describe();
    if (!k.convolution) {
        r.max_violation = 0.0;
        r.pass = true;
        r.note = "no convolution form declared";
        return r;
    }
    const auto states = plan.states(k.dim);
    bool ok = true;
    for (auto [t, s] : plan.pairs(k.orientation))
        for (const auto& [x, y] : states) {
            const Vec full = k.eval(t, s, x, y);
            const Vec conv = k.convolution->theta(t - s) * k.convolution->fhat(s, x, y);
            const double v = (full - conv).norm();
            ++r.samples;
            if (v > rounding_slack(full.norm()) * 10.0) ok = false;
            if (v > r.max_violation) {
                r.max_violation = v;
                r.witness = {0.0, t, s, x, y, {}, {}};
            }
        }
    r.pass = ok;
    return r;
}

SplitCheckReport check_split_consistency(const SplitKernelSpec& k, const SamplePlan& plan) {
    SplitCheckReport r;
    const auto states = plan.states(k.dim());
    bool ok = true;
    for (auto [t, s] : plan.pairs(k.orientation()))
        for (const auto& [x, y] : states) {
            const Vec full = k(t, s, x, y);
            const Vec a = k.aa_part.eval(t, s, x, y);
            const Vec e = k.ergodic ? k.ergodic(t, s, x, y) : Vec::Zero(k.dim());
            const double res = (full - a - e).norm();
            ++r.samples;
            if (res > rounding_slack(full.norm()) * 10.0) ok = false;
            if (res > r.split_residual) {
                r.split_residual = res;
                r.split_witness = {0.0, t, s, x, y, {}, {}};
            }
            if (k.ergodic) {
                if (!k.theta || !k.bhat) throw Error("check_split_consistency: ergodic part without envelope");
                const double bound = k.theta(t, s) * k.bhat(s, x, y);
                const double v = e.norm() - bound;
                if (v > rounding_slack(bound)) ok = false;
                if (v > r.envelope_violation) {
                    r.envelope_violation = v;
                    r.envelope_witness = {0.0, t, s, x, y, {}, {}};
                }
            }
        }
    if (!k.ergodic) r.envelope_violation = 0.0;
    r.pass = ok;
    return r;
}

}  // namespace aafix

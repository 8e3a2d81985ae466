#include "aafix/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace aafix {

namespace {

// Relative envelope mass left beyond the far cut of a semi-infinite integral.
constexpr double kFarTail = 1e-17;

// Kronrod 15-point nodes (non-negative half) and weights, with the embedded
// 7-point Gauss weights on the odd nodes.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a = 0.0, b = 0.0;
    Vec value;
    double error = 0.0;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const VecIntegrand& g, double a, double b, int& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Vec fc = g(c);
    Vec kron = wgk[7] * fc;
    Vec gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[static_cast<std::size_t>(j)];
        Vec f1 = g(c - dx);
        Vec f2 = g(c + dx);
        kron += wgk[static_cast<std::size_t>(j)] * (f1 + f2);
        if (j % 2 == 1) gauss += wg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
    }
    evals += 15;
    Panel p;
    p.a = a;
    p.b = b;
    p.value = kron * h;
    p.error = ((kron - gauss) * h).norm();
    if (!p.value.allFinite()) throw QuadratureError("quadrature: non-finite integrand value");
    return p;
}

QuadResult adaptive(const VecIntegrand& g, double a, double b, double tol, const QuadOptions& opt) {
    QuadResult res;
    if (b == a) {
        res.value = g(a) * 0.0;
        res.evaluations = 1;
        return res;
    }
    const double len = b - a;
    const int panels = std::clamp(static_cast<int>(std::ceil(len / opt.panel_width)), 1, 4096);
    std::priority_queue<Panel> heap;
    Vec total;
    double err = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + len * i / panels;
        const double pb = i + 1 == panels ? b : a + len * (i + 1) / panels;
        Panel p = gk15(g, pa, pb, res.evaluations);
        if (total.size() == 0) total = Vec::Zero(p.value.size());
        total += p.value;
        err += p.error;
        heap.push(std::move(p));
    }
    int splits = 0;
    while (err > tol) {
        if (splits++ >= opt.max_subdivisions) {
            std::ostringstream msg;
            msg << "quadrature: tolerance " << tol << " unreachable on [" << a << ", " << b << "], error estimate "
                << err;
            throw QuadratureError(msg.str());
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("quadrature: panel width underflow");
        }
        Panel left = gk15(g, worst.a, mid, res.evaluations);
        Panel right = gk15(g, mid, worst.b, res.evaluations);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
        if (err <= tol) {
            // recompute from panels to shed accumulated rounding
            double e = 0.0;
            Vec s = Vec::Zero(total.size());
            auto copy = heap;
            while (!copy.empty()) {
                e += copy.top().error;
                s += copy.top().value;
                copy.pop();
            }
            err = e;
            total = s;
        }
    }
    res.value = total;
    res.error_estimate = err;
    return res;
}

// direction +1: integrate over [t, t+T]; -1: over [t-T, t].
QuadResult semi_infinite(const VecIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt, int dir) {
    auto piece = [&](double u0, double u1, double tol) {
        return dir > 0 ? adaptive(g, t + u0, t + u1, tol, opt) : adaptive(g, t - u1, t - u0, tol, opt);
    };
    if (tail.kind != TailBound::Kind::probe) {
        const double T = tail.truncation(0.5 * opt.tol);
        QuadResult r = T > 0.0 ? piece(0.0, T, 0.5 * opt.tol) : piece(0.0, 0.0, 0.5 * opt.tol);
        // Far piece: out to where the envelope mass is below rounding, on wide panels.
        const double mass = tail.tail_integral(0.0);
        const double T2 = mass > 0.0 ? tail.truncation(kFarTail * mass) : T;
        double cut = T;
        if (T2 > T) {
            QuadOptions far = opt;
            far.panel_width = 4.0 * opt.panel_width;
            QuadResult f = dir > 0 ? adaptive(g, t + T, t + T2, 0.25 * opt.tol, far)
                                   : adaptive(g, t - T2, t - T, 0.25 * opt.tol, far);
            r.value += f.value;
            r.error_estimate += f.error_estimate;
            r.evaluations += f.evaluations;
            cut = T2;
        }
        r.truncation = cut;
        r.tail_bound = tail.tail_integral(cut);
        return r;
    }
    // Probe: double the span until a new chunk is negligible.
    double T = std::max(opt.panel_width, 1.0);
    QuadResult r = piece(0.0, T, 0.25 * opt.tol);
    double prev_chunk = std::numeric_limits<double>::infinity();
    for (;;) {
        if (2.0 * T > opt.max_span) {
            std::ostringstream msg;
            msg << "quadrature: integrand tail not integrable within span " << opt.max_span;
            throw DivergenceError(msg.str());
        }
        QuadResult chunk = piece(T, 2.0 * T, 0.25 * opt.tol);
        r.value += chunk.value;
        r.error_estimate += chunk.error_estimate;
        r.evaluations += chunk.evaluations;
        const double c = chunk.value.norm();
        T *= 2.0;
        if (c <= 0.05 * opt.tol && c <= prev_chunk) {
            r.tail_bound = c;
            break;
        }
        prev_chunk = c;
    }
    r.truncation = T;
    return r;
}

VecIntegrand lift(const ScalarIntegrand& g) {
    return [&g](double s) {
        Vec v(1);
        v(0) = g(s);
        return v;
    };
}

}  // namespace

std::string to_string(Orientation o) {
    switch (o) {
        case Orientation::delayed: return "delayed";
        case Orientation::advanced: return "advanced";
        case Orientation::half_line_delayed: return "half_line_delayed";
    }
    return "?";
}

TailBound TailBound::exponential(double c, double rate) {
    if (!(rate > 0.0) || c < 0.0) throw Error("TailBound::exponential: need c >= 0 and rate > 0");
    return {Kind::exponential, c, rate};
}

TailBound TailBound::gaussian(double c, double width) {
    if (!(width > 0.0) || c < 0.0) throw Error("TailBound::gaussian: need c >= 0 and width > 0");
    return {Kind::gaussian, c, width};
}

double TailBound::bound(double u) const {
    switch (kind) {
        case Kind::exponential: return c * std::exp(-rate * u);
        case Kind::gaussian: return c * std::exp(-(u / rate) * (u / rate));
        case Kind::probe: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double TailBound::tail_integral(double T) const {
    switch (kind) {
        case Kind::exponential: return c / rate * std::exp(-rate * T);
        case Kind::gaussian: return c * rate * 0.5 * std::sqrt(M_PI) * std::erfc(T / rate);
        case Kind::probe: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double TailBound::truncation(double eps) const {
    if (kind == Kind::probe) throw Error("TailBound::truncation: probe tails have no analytic cut");
    if (tail_integral(0.0) <= eps) return 0.0;
    if (kind == Kind::exponential) return std::log(c / (rate * eps)) / rate;
    double lo = 0.0, hi = rate;
    while (tail_integral(hi) > eps) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail_integral(mid) > eps ? lo : hi) = mid;
    }
    return hi;
}

std::string TailBound::describe() const {
    std::ostringstream s;
    switch (kind) {
        case Kind::exponential: s << "exponential(c=" << c << ", rate=" << rate << ")"; break;
        case Kind::gaussian: s << "gaussian(c=" << c << ", width=" << rate << ")"; break;
        case Kind::probe: s << "probe"; break;
    }
    return s.str();
}

QuadResult integrate_interval(const VecIntegrand& g, double a, double b, const QuadOptions& opt) {
    if (b < a) {
        QuadResult r = adaptive(g, b, a, opt.tol, opt);
        r.value = -r.value;
        return r;
    }
    return adaptive(g, a, b, opt.tol, opt);
}

double integrate_interval(const ScalarIntegrand& g, double a, double b, const QuadOptions& opt) {
    return integrate_interval(lift(g), a, b, opt).value(0);
}

QuadResult integrate_delayed(const VecIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt) {
    return semi_infinite(g, t, tail, opt, -1);
}

double integrate_delayed(const ScalarIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt) {
    return integrate_delayed(lift(g), t, tail, opt).value(0);
}

QuadResult integrate_advanced(const VecIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt) {
    return semi_infinite(g, t, tail, opt, +1);
}

double integrate_advanced(const ScalarIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt) {
    return integrate_advanced(lift(g), t, tail, opt).value(0);
}

namespace {

void verify_tail(const TwoTimeEnvelope& env, Orientation o, double t, double tol) {
    if (env.tail.kind == TailBound::Kind::probe || o == Orientation::half_line_delayed) return;
    const double T = std::max(env.tail.truncation(0.5 * tol), 1.0);
    for (int k = 0; k <= 16; ++k) {
        const double u = T * (1.0 + 0.25 * k);
        const double s = o == Orientation::delayed ? t - u : t + u;
        const double v = env(t, s);
        if (v > env.tail.bound(u) * (1.0 + 1e-9) + 1e-300) {
            std::ostringstream msg;
            msg << "envelope " << (env.label.empty() ? "?" : env.label) << " exceeds its declared tail "
                << env.tail.describe() << " at t=" << t << ", |t-s|=" << u << " (" << v << ")";
            throw DivergenceError(msg.str());
        }
    }
}

}  // namespace

double oriented_integral(const TwoTimeEnvelope& env, Orientation o, double t, const QuadOptions& opt) {
    auto g = [&](double s) { return env(t, s); };
    switch (o) {
        case Orientation::delayed: return integrate_delayed(ScalarIntegrand(g), t, env.tail, opt);
        case Orientation::advanced: return integrate_advanced(ScalarIntegrand(g), t, env.tail, opt);
        case Orientation::half_line_delayed:
            return t <= 0.0 ? 0.0 : integrate_interval(ScalarIntegrand(g), 0.0, t, opt);
    }
    return 0.0;
}

EnvelopeValue envelope_constant(const TwoTimeEnvelope& env, Orientation o, const std::vector<double>& t_grid,
                                double tol) {
    if (!env) throw Error("envelope_constant: missing envelope");
    if (t_grid.empty()) throw Error("envelope_constant: empty t-grid");
    QuadOptions opt;
    opt.tol = tol;
    EnvelopeValue out;
    out.value = -1.0;
    for (double t : t_grid) {
        verify_tail(env, o, t, tol);
        const double v = oriented_integral(env, o, t, opt);
        if (!std::isfinite(v)) throw DivergenceError("envelope_constant: non-finite integral");
        if (v > out.value) {
            out.value = v;
            out.argmax = t;
        }
    }
    out.value = std::max(out.value, 0.0);
    out.grid_points = t_grid.size();
    out.grid_min = *std::min_element(t_grid.begin(), t_grid.end());
    out.grid_max = *std::max_element(t_grid.begin(), t_grid.end());
    out.tol = tol;
    out.computed = true;
    out.note = env.label;
    return out;
}

EnvelopeValue grid_sup(const std::function<double(double)>& fn, const std::vector<double>& t_grid, double tol) {
    if (t_grid.empty()) throw Error("grid_sup: empty t-grid");
    EnvelopeValue out;
    out.value = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        const double v = fn(t);
        if (!std::isfinite(v)) throw DivergenceError("grid_sup: non-finite value");
        if (v > out.value) {
            out.value = v;
            out.argmax = t;
        }
    }
    out.grid_points = t_grid.size();
    out.grid_min = *std::min_element(t_grid.begin(), t_grid.end());
    out.grid_max = *std::max_element(t_grid.begin(), t_grid.end());
    out.tol = tol;
    out.computed = true;
    return out;
}

TrendReport limit_trend(const std::function<double(double)>& fn, const std::vector<double>& points, double tol) {
    TrendReport r;
    r.points = points;
    r.non_increasing = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        r.values.push_back(fn(points[i]));
        if (i > 0 && r.values[i] > r.values[i - 1] + tol) r.non_increasing = false;
    }
    r.last = r.values.empty() ? 0.0 : r.values.back();
    r.below_tol = std::abs(r.last) <= tol;
    return r;
}

}  // namespace aafix

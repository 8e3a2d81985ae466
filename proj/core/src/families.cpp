#include "aafix/families.hpp"

#include <cmath>
#include <sstream>

namespace aafix {

double psi(double t) { return std::sin(1.0 / (2.0 + std::cos(t) + std::cos(std::sqrt(2.0) * t))); }

double Forcing::scalar(double t) const {
    const double arg = frequency * t + phase;
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::constant: return amplitude;
        case Kind::sin: return amplitude * std::sin(arg);
        case Kind::cos: return amplitude * std::cos(arg);
        case Kind::psi: return amplitude * psi(arg);
        case Kind::sin_plus_decay: return amplitude * (std::sin(arg) + std::exp(-decay * t));
    }
    return 0.0;
}

Vec Forcing::operator()(double t, int dim) const {
    Vec v = Vec::Zero(dim);
    if (kind == Kind::zero) return v;
    const double s = scalar(t);
    if (component < 0)
        v.setConstant(s);
    else if (component < dim)
        v(component) = s;
    else
        throw Error("Forcing: component out of range");
    return v;
}

double Forcing::sup_bound() const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::constant:
        case Kind::sin:
        case Kind::cos:
        case Kind::psi: return std::abs(amplitude);
        case Kind::sin_plus_decay: return 2.0 * std::abs(amplitude);
    }
    return 0.0;
}

std::string Forcing::describe() const {
    std::ostringstream s;
    s << to_string(kind);
    if (kind != Kind::zero) s << "(amplitude=" << amplitude << ", frequency=" << frequency << ", phase=" << phase << ")";
    return s.str();
}

Forcing::Kind forcing_kind_from_string(const std::string& name) {
    if (name == "zero") return Forcing::Kind::zero;
    if (name == "constant") return Forcing::Kind::constant;
    if (name == "sin") return Forcing::Kind::sin;
    if (name == "cos") return Forcing::Kind::cos;
    if (name == "psi") return Forcing::Kind::psi;
    if (name == "sin_plus_decay") return Forcing::Kind::sin_plus_decay;
    throw ConfigError("unknown forcing '" + name + "'");
}

std::string to_string(Forcing::Kind k) {
    switch (k) {
        case Forcing::Kind::zero: return "zero";
        case Forcing::Kind::constant: return "constant";
        case Forcing::Kind::sin: return "sin";
        case Forcing::Kind::cos: return "cos";
        case Forcing::Kind::psi: return "psi";
        case Forcing::Kind::sin_plus_decay: return "sin_plus_decay";
    }
    return "?";
}

double Nonlinearity::lipschitz_on(double r) const {
    if (lipschitz_curve) return lipschitz_curve(r);
    if (lipschitz) return *lipschitz;
    throw Error("nonlinearity " + name + " has no Lipschitz data");
}

StateMap state_map_from_string(const std::string& name) {
    if (name == "linear") return StateMap::linear;
    if (name == "tanh") return StateMap::tanh;
    throw ConfigError("unknown state map '" + name + "'");
}

Orientation orientation_from_string(const std::string& name) {
    if (name == "delayed") return Orientation::delayed;
    if (name == "advanced") return Orientation::advanced;
    if (name == "half_line_delayed") return Orientation::half_line_delayed;
    throw ConfigError("unknown orientation '" + name + "'");
}

namespace {

Vec apply_map(StateMap m, const Vec& x) {
    return m == StateMap::linear ? x : Vec(x.array().tanh().matrix());
}

// sup of |m(x)| over the ball of radius r
double map_bound(StateMap m, double r, int dim) {
    return m == StateMap::linear ? r : std::min(r, std::sqrt(static_cast<double>(dim)));
}

}  // namespace

Nonlinearity make_nonlinearity(const NonlinearityParams& p) {
    Nonlinearity f;
    f.dim = p.dim;
    f.forcing = p.forcing;
    f.name = p.family;
    const Forcing forcing = p.forcing;
    const int d = p.dim;
    const double a = p.a, b = p.b;
    if (p.family == "zero") {
        f.forcing = Forcing{};
        f.eval = [d](double, const Vec&, const Vec&) { return Vec::Zero(d); };
        f.lipschitz = 0.0;
    } else if (p.family == "linear") {
        f.eval = [forcing, d, a, b](double t, const Vec& x, const Vec& y) { return Vec(forcing(t, d) + a * x + b * y); };
        f.lipschitz = std::max(std::abs(a), std::abs(b));
    } else if (p.family == "tanh") {
        f.eval = [forcing, d, a, b](double t, const Vec& x, const Vec& y) {
            return Vec(forcing(t, d) + a * x.array().tanh().matrix() + b * y.array().tanh().matrix());
        };
        f.lipschitz = std::max(std::abs(a), std::abs(b));
    } else if (p.family == "quadratic") {
        f.eval = [forcing, d, a, b](double t, const Vec& x, const Vec& y) {
            return Vec(forcing(t, d) + a * x.cwiseProduct(x) + b * y.cwiseProduct(y));
        };
        const double m = std::max(std::abs(a), std::abs(b));
        f.lipschitz_curve = [m](double r) { return 2.0 * m * r; };
    } else {
        throw ConfigError("unknown nonlinearity family '" + p.family + "'");
    }
    if (p.declared_curve) {
        const auto c = *p.declared_curve;
        f.lipschitz_curve = [c](double r) { return c[0] + c[1] / (1.0 + r) + c[2] * r; };
        f.lipschitz.reset();
    }
    return f;
}

KernelSpec make_kernel(const KernelParams& p) {
    KernelSpec k;
    k.name = p.family;
    k.dim = p.dim;
    k.orientation = p.orientation;
    k.bound_radius = p.radius;
    const int d = p.dim;
    const StateMap map = p.map;
    const double c = p.coeff, wx = p.wx, wy = p.wy, bias = p.bias, amp = p.amp, freq = p.freq;

    if (p.family == "zero") {
        k.eval = [d](double, double, const Vec&, const Vec&) { return Vec::Zero(d); };
        k.lambda = {[](double, double) { return 0.0; }, TailBound::exponential(0.0, 1.0), "zero"};
        k.mu = k.lambda;
        k.limit_mu = k.mu;
        return k;
    }

    std::function<double(double)> decay;
    TailBound unit;
    if (p.family == "exp_decay" || p.family == "conv_sinusoid") {
        const double rate = p.rate;
        if (!(rate > 0.0)) throw ConfigError("kernel rate must be positive");
        decay = [rate](double u) { return std::exp(-rate * std::abs(u)); };
        unit = TailBound::exponential(1.0, rate);
    } else if (p.family == "gauss_decay") {
        const double width = p.rate;
        if (!(width > 0.0)) throw ConfigError("kernel width must be positive");
        decay = [width](double u) { return std::exp(-(u / width) * (u / width)); };
        unit = TailBound::gaussian(1.0, width);
    } else {
        throw ConfigError("unknown kernel family '" + p.family + "'");
    }

    const bool modulated = p.family == "conv_sinusoid";
    auto fhat = [map, c, wx, wy, bias, amp, freq, modulated](double s, const Vec& x, const Vec& y) {
        Vec v = c * (wx * apply_map(map, x) + wy * apply_map(map, y));
        v.array() += bias;
        if (modulated) v *= 1.0 + amp * std::sin(freq * s);
        return v;
    };
    k.eval = [decay, fhat](double t, double s, const Vec& x, const Vec& y) { return Vec(decay(t - s) * fhat(s, x, y)); };
    k.convolution = ConvolutionForm{decay, fhat};

    const double mod = modulated ? 1.0 + std::abs(amp) : 1.0;
    const double lam0 = mod * (std::abs(c) * (std::abs(wx) + std::abs(wy)) * map_bound(map, p.radius, d) +
                               std::abs(bias) * std::sqrt(static_cast<double>(d)));
    const double mu0 = mod * std::abs(c) * std::max(std::abs(wx), std::abs(wy));
    auto scaled = [&](double factor) {
        TailBound tb = unit;
        tb.c = factor;
        return tb;
    };
    k.lambda = {[decay, lam0](double t, double s) { return lam0 * decay(t - s); }, scaled(lam0), "lambda"};
    k.mu = {[decay, mu0](double t, double s) { return mu0 * decay(t - s); }, scaled(mu0), "mu"};
    if (!modulated) k.limit_mu = k.mu;
    return k;
}

SplitKernelSpec make_split_kernel(const SplitKernelParams& p) {
    if (p.aa.family != "exp_decay" && p.aa.family != "gauss_decay" && p.aa.family != "zero")
        throw ConfigError("split kernels need an exp_decay or gauss_decay principal part");
    SplitKernelSpec k;
    k.aa_part = make_kernel(p.aa);
    k.name = "split(" + p.aa.family + ")";
    const int d = p.aa.dim;
    const StateMap map = p.aa.map;
    const double ce = p.ergodic_coeff, decay_t = p.ergodic_decay, wx = p.aa.wx, wy = p.aa.wy, eb = p.ergodic_bias;
    if (!(decay_t > 0.0)) throw ConfigError("ergodic decay must be positive");

    std::function<double(double)> decay;
    TailBound unit;
    if (p.aa.family == "gauss_decay") {
        const double width = p.aa.rate;
        decay = [width](double u) { return std::exp(-(u / width) * (u / width)); };
        unit = TailBound::gaussian(1.0, width);
    } else {
        const double rate = p.aa.rate;
        decay = [rate](double u) { return std::exp(-rate * std::abs(u)); };
        unit = TailBound::exponential(1.0, rate);
    }
    auto shape = [map, wx, wy, eb](const Vec& x, const Vec& y) {
        Vec v = wx * apply_map(map, x) + wy * apply_map(map, y);
        v.array() += eb;
        return v;
    };
    if (ce != 0.0) {
        k.ergodic = [ce, decay_t, decay, shape](double t, double s, const Vec& x, const Vec& y) {
            return Vec(ce * std::exp(-decay_t * std::max(t, 0.0)) * decay(t - s) * shape(x, y));
        };
        k.theta = {[ce, decay_t, decay](double t, double s) {
                       return std::abs(ce) * std::exp(-decay_t * std::max(t, 0.0)) * decay(t - s);
                   },
                   [&] {
                       TailBound tb = unit;
                       tb.c = std::abs(ce);
                       return tb;
                   }(),
                   "theta"};
        k.bhat = [shape](double, const Vec& x, const Vec& y) { return shape(x, y).norm(); };
        const double m3 = std::abs(ce) * std::max(std::abs(wx), std::abs(wy));
        k.mu3 = {[m3, decay_t, decay](double t, double s) {
                     return m3 * std::exp(-decay_t * std::max(t, 0.0)) * decay(t - s);
                 },
                 [&] {
                     TailBound tb = unit;
                     tb.c = m3;
                     return tb;
                 }(),
                 "mu3"};
    } else {
        k.mu3 = {[](double, double) { return 0.0; }, TailBound::exponential(0.0, 1.0), "mu3"};
    }
    const double bias = p.aa.bias;
    k.vartheta = TwoTimeEnvelope{[bias, d, decay](double t, double s) {
                                     return std::abs(bias) * std::sqrt(static_cast<double>(d)) * decay(t - s);
                                 },
                                 [&] {
                                     TailBound tb = unit;
                                     tb.c = std::abs(bias) * std::sqrt(static_cast<double>(d));
                                     return tb;
                                 }(),
                                 "vartheta"};
    return k;
}

}  // namespace aafix

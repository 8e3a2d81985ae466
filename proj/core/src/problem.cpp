#include "aafix/problem.hpp"

#include <cmath>
#include <sstream>

namespace aafix {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::advanced_delayed: return "advanced_delayed";
        case Variant::delayed_only: return "delayed_only";
        case Variant::half_line: return "half_line";
        case Variant::evolution_nonlocal: return "evolution_nonlocal";
        case Variant::resolvent_nonlocal: return "resolvent_nonlocal";
        case Variant::delay_parabolic: return "delay_parabolic";
    }
    return "unknown";
}

Variant variant_from_string(const std::string& name) {
    for (auto v : {Variant::advanced_delayed, Variant::delayed_only, Variant::half_line, Variant::evolution_nonlocal,
                   Variant::resolvent_nonlocal, Variant::delay_parabolic})
        if (to_string(v) == name) return v;
    throw ConfigError("unknown variant '" + name + "'");
}

Vec NonlocalMap::operator()(const SampledPath& u, int dim) const {
    Vec out = at_zero(dim);
    for (std::size_t k = 0; k < times.size(); ++k) out += weights[k] * u.evaluate(times[k]);
    return out;
}

Vec NonlocalMap::at_zero(int dim) const {
    if (offset.size() == 0) return Vec::Zero(dim);
    if (offset.size() != dim) throw Error("nonlocal map: offset dimension mismatch");
    return offset;
}

double NonlocalMap::lipschitz() const {
    double s = 0.0;
    for (double w : weights) s += std::abs(w);
    return s;
}

CausalOperator CausalOperator::exponential(int dim, double coeff, double rate) {
    CausalOperator op;
    if (coeff == 0.0) return op;
    op.kernel = [dim, coeff, rate](double t, double s) {
        return Mat(coeff * std::exp(-rate * (t - s)) * Mat::Identity(dim, dim));
    };
    std::ostringstream os;
    os << coeff << " exp(-" << rate << " (t-s)) I";
    op.label = os.str();
    return op;
}

DomainKind ProblemSpec::domain() const noexcept {
    switch (variant) {
        case Variant::half_line:
        case Variant::evolution_nonlocal:
        case Variant::resolvent_nonlocal: return DomainKind::half_line;
        default: return DomainKind::full_line;
    }
}

std::vector<double> ProblemSpec::grid() const {
    const double lo = domain() == DomainKind::half_line ? 0.0 : t_min;
    return uniform_grid(lo, t_max, step);
}

std::vector<double> ProblemSpec::sup_t_grid() const {
    if (!sup_grid.empty()) return sup_grid;
    const double lo = domain() == DomainKind::half_line ? 0.0 : t_min;
    return linspace(lo, t_max, 401);
}

Vec ProblemSpec::initial_state() const {
    if (u0.size() == 0) return Vec::Zero(dim);
    return u0;
}

std::pair<double, double> ProblemSpec::stability_constants() const {
    if (variant == Variant::resolvent_nonlocal) {
        if (!resolvent || !resolvent->decay) throw CertificationError("resolvent decay constants (M, gamma, q) missing");
        const auto& d = *resolvent->decay;
        return {d.M, d.gamma / d.q};
    }
    if (!stability) throw CertificationError("missing stability certificate for the evolution family");
    if (!stability->pass) throw CertificationError("stability certificate failed: " + stability->message);
    return {stability->M, stability->delta};
}

void ProblemSpec::validate() const {
    if (dim < 1) throw ConfigError("dimension must be positive");
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    const double lo = domain() == DomainKind::half_line ? 0.0 : t_min;
    if (!(t_max > lo)) throw ConfigError("empty working window");
    if (!(quad_tol > 0.0) || !(constants_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (slack < 0.0) throw ConfigError("slack must be nonnegative");
    if (!f.eval) throw ConfigError("nonlinearity missing");
    if (f.dim != dim) throw ConfigError("nonlinearity dimension mismatch");
    if (f.lipschitz && *f.lipschitz < 0.0) throw ConfigError("negative Lipschitz constant");
    auto need_kernel = [&](const std::optional<KernelSpec>& k, Orientation o, const char* what) {
        if (!k) return;
        if (k->dim != dim) throw ConfigError(std::string(what) + ": dimension mismatch");
        if (k->orientation != o) throw ConfigError(std::string(what) + ": orientation must be " + to_string(o));
    };
    switch (variant) {
        case Variant::advanced_delayed:
            need_kernel(c1, Orientation::delayed, "kernel c1");
            need_kernel(c2, Orientation::advanced, "kernel c2");
            break;
        case Variant::delayed_only:
            if (c2) throw ConfigError("delayed_only problems take no advanced kernel");
            need_kernel(c1, Orientation::delayed, "kernel c1");
            break;
        case Variant::half_line:
            if (b1 && b1->dim() != dim) throw ConfigError("kernel b1: dimension mismatch");
            if (b2 && b2->dim() != dim) throw ConfigError("kernel b2: dimension mismatch");
            if (b1 && b1->orientation() != Orientation::half_line_delayed)
                throw ConfigError("kernel b1: orientation must be half_line_delayed");
            if (b2 && b2->orientation() != Orientation::advanced)
                throw ConfigError("kernel b2: orientation must be advanced");
            break;
        case Variant::evolution_nonlocal:
        case Variant::delay_parabolic:
            if (!family) throw ConfigError(to_string(variant) + " needs an evolution family");
            if (family->dim() != dim) throw ConfigError("evolution family dimension mismatch");
            if (variant == Variant::delay_parabolic && delay_tau < 0.0) throw ConfigError("delay must be nonnegative");
            break;
        case Variant::resolvent_nonlocal:
            if (!resolvent) throw ConfigError("resolvent_nonlocal needs a resolvent operator");
            if (resolvent->dim() != dim) throw ConfigError("resolvent dimension mismatch");
            if (resolvent->t_max() < t_max - 1e-12) throw ConfigError("resolvent table shorter than the window");
            break;
    }
    if (u0.size() != 0 && u0.size() != dim) throw ConfigError("u0 dimension mismatch");
    if (g.times.size() != g.weights.size()) throw ConfigError("nonlocal map: times and weights differ in length");
    for (double t : g.times)
        if (t < 0.0 || t > t_max) throw ConfigError("nonlocal map: evaluation time outside [0, t_max]");
}

}  // namespace aafix

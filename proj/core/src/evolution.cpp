#include "aafix/evolution.hpp"

#include "aafix/families.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aafix {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

double radical_inverse(std::size_t index, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

// Integrates y' = rhs(r, y) through the given ascending times, writing the
// state at each into out(:, k).
template <class Rhs>
void integrate_through(Rhs&& rhs, State y, double s, const std::vector<double>& times, const PropagationOptions& opt,
                       Mat& out) {
    using Stepper = odeint::runge_kutta_dopri5<State>;
    auto stepper = odeint::make_controlled<Stepper>(opt.abs_tol, opt.rel_tol);
    const auto rows = static_cast<Eigen::Index>(y.size());
    out.resize(rows, static_cast<Eigen::Index>(times.size()));
    std::size_t k = 0;
    while (k < times.size() && times[k] == s) {
        out.col(static_cast<Eigen::Index>(k++)) = Eigen::Map<const Vec>(y.data(), rows);
    }
    if (k == times.size()) return;
    std::vector<double> obs;
    obs.reserve(times.size() - k + 1);
    obs.push_back(s);
    for (std::size_t i = k; i < times.size(); ++i) {
        if (times[i] < obs.back()) throw DomainError("propagation times must be ascending and >= start");
        obs.push_back(times[i]);
    }
    std::size_t idx = 0;
    auto observer = [&](const State& x, double) {
        if (idx > 0) out.col(static_cast<Eigen::Index>(k + idx - 1)) = Eigen::Map<const Vec>(x.data(), rows);
        ++idx;
    };
    const double span = obs.back() - s;
    const double dt = std::min(opt.initial_step, std::max(span, 1e-12));
    try {
        odeint::integrate_times(stepper, rhs, y, obs.begin(), obs.end(), dt, observer,
                                odeint::max_step_checker(static_cast<int>(std::min<std::size_t>(opt.max_steps, 1u << 30))));
    } catch (const odeint::step_adjustment_error& e) {
        throw PropagationError(std::string("propagation failed: ") + e.what());
    } catch (const odeint::no_progress_error& e) {
        throw PropagationError(std::string("propagation failed: ") + e.what());
    }
    for (Eigen::Index c = 0; c < out.cols(); ++c)
        if (!out.col(c).allFinite()) throw PropagationError("propagation produced non-finite values");
}

}  // namespace

double operator_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1 || m.cols() == 1) return m.norm();
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

EvolutionFamily::EvolutionFamily(int dim, Generator A, std::string label, PropagationOptions opt)
    : dim_(dim), A_(std::move(A)), label_(std::move(label)), opt_(opt) {
    if (dim_ < 1) throw Error("EvolutionFamily: dimension must be positive");
    if (!A_) throw Error("EvolutionFamily: missing generator");
}

EvolutionFamily EvolutionFamily::constant(const Mat& A, std::string label) {
    if (A.rows() != A.cols()) throw Error("EvolutionFamily: generator must be square");
    return EvolutionFamily(static_cast<int>(A.rows()), [A](double) { return A; }, std::move(label));
}

EvolutionFamily EvolutionFamily::scalar_sinusoid(int dim, double base, double amplitude, double frequency) {
    std::ostringstream s;
    s << "-(" << base << " + " << amplitude << " sin(" << frequency << " t)) I";
    return EvolutionFamily(
        dim,
        [dim, base, amplitude, frequency](double t) {
            return Mat(-(base + amplitude * std::sin(frequency * t)) * Mat::Identity(dim, dim));
        },
        s.str());
}

EvolutionFamily EvolutionFamily::scalar_psi(int dim, double base, double amplitude) {
    std::ostringstream s;
    s << "-(" << base << " + " << amplitude << " psi(t)) I";
    return EvolutionFamily(
        dim, [dim, base, amplitude](double t) { return Mat(-(base + amplitude * psi(t)) * Mat::Identity(dim, dim)); },
        s.str());
}

Vec EvolutionFamily::propagate(double t, double s, const Vec& x) const {
    if (t < s) throw DomainError("propagate: need t >= s");
    if (x.size() != dim_) throw Error("propagate: state dimension mismatch");
    if (t == s) return x;
    auto rhs = [this](const State& y, State& dy, double r) {
        const Mat a = A_(r);
        Eigen::Map<Vec>(dy.data(), dim_) = a * Eigen::Map<const Vec>(y.data(), dim_);
    };
    Mat out;
    integrate_through(rhs, State(x.data(), x.data() + x.size()), s, {t}, opt_, out);
    return out.col(0);
}

Mat EvolutionFamily::propagator(double t, double s) const {
    if (t < s) throw DomainError("propagator: need t >= s");
    if (t == s) return Mat::Identity(dim_, dim_);
    const int d = dim_;
    auto rhs = [this, d](const State& y, State& dy, double r) {
        const Mat a = A_(r);
        Eigen::Map<Mat>(dy.data(), d, d) = a * Eigen::Map<const Mat>(y.data(), d, d);
    };
    Mat id = Mat::Identity(d, d);
    Mat out;
    integrate_through(rhs, State(id.data(), id.data() + id.size()), s, {t}, opt_, out);
    return Eigen::Map<const Mat>(out.col(0).data(), d, d);
}

Mat EvolutionFamily::propagate_forced(double s, const Vec& w0, const std::vector<double>& times,
                                      const std::function<Vec(double)>& h) const {
    if (w0.size() != dim_) throw Error("propagate_forced: state dimension mismatch");
    const int d = dim_;
    auto rhs = [this, d, &h](const State& y, State& dy, double r) {
        const Mat a = A_(r);
        Eigen::Map<Vec>(dy.data(), d) = a * Eigen::Map<const Vec>(y.data(), d) + h(r);
    };
    Mat out;
    integrate_through(rhs, State(w0.data(), w0.data() + w0.size()), s, times, opt_, out);
    return out;
}

StabilityPlan StabilityPlan::standard(double window, double max_lag) {
    StabilityPlan p;
    for (int i = 0; i <= 8; ++i) p.starts.push_back(-window + 2.0 * window * i / 8.0 + 0.37 * (i % 3));
    for (int i = 0; i <= 20; ++i) p.lags.push_back(max_lag * i / 20.0);
    return p;
}

StabilityReport certify_stability(const EvolutionFamily& fam, const StabilityPlan& plan,
                                  std::optional<std::pair<double, double>> candidate) {
    if (plan.starts.empty() || plan.lags.empty()) throw Error("certify_stability: empty plan");
    struct Sample {
        double t, s, norm;
    };
    std::vector<Sample> samples;
    for (double s : plan.starts) {
        std::vector<double> times(plan.lags.size());
        for (std::size_t i = 0; i < plan.lags.size(); ++i) times[i] = s + plan.lags[i];
        std::sort(times.begin(), times.end());
        // propagate the identity as d forced problems sharing the time list
        const int d = fam.dim();
        std::vector<Mat> cols(times.size(), Mat(d, d));
        for (int j = 0; j < d; ++j) {
            Vec e = Vec::Zero(d);
            e(j) = 1.0;
            const Mat w = fam.propagate_forced(s, e, times, [d](double) { return Vec::Zero(d); });
            for (std::size_t k = 0; k < times.size(); ++k) cols[k].col(j) = w.col(static_cast<Eigen::Index>(k));
        }
        for (std::size_t k = 0; k < times.size(); ++k) samples.push_back({times[k], s, operator_norm(cols[k])});
    }

    StabilityReport r;
    r.samples = samples.size();
    if (candidate) {
        r.M = candidate->first;
        r.delta = candidate->second;
    } else {
        r.empirical = true;
        double max_lag = 0.0;
        for (const auto& x : samples) max_lag = std::max(max_lag, x.t - x.s);
        double delta = std::numeric_limits<double>::infinity();
        for (const auto& x : samples) {
            const double lag = x.t - x.s;
            if (lag >= 0.5 * max_lag && lag > 0.0) delta = std::min(delta, -std::log(x.norm) / lag);
        }
        if (!std::isfinite(delta)) throw Error("certify_stability: plan has no positive lags");
        r.delta = delta;
        double M = 0.0;
        for (const auto& x : samples) M = std::max(M, x.norm * std::exp(delta * (x.t - x.s)));
        r.M = M;
    }
    r.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& x : samples) {
        const double slack = r.M * std::exp(-r.delta * (x.t - x.s)) - x.norm;
        if (slack < r.worst_slack) {
            r.worst_slack = slack;
            r.witness_t = x.t;
            r.witness_s = x.s;
            r.witness_norm = x.norm;
        }
    }
    std::ostringstream msg;
    if (!(r.delta > 0.0)) {
        r.pass = false;
        msg << "growth: |U(" << r.witness_t << ", " << r.witness_s << ")| = " << r.witness_norm
            << ", fitted decay rate " << r.delta << " is not positive";
    } else if (r.worst_slack < -1e-12 * r.M) {
        r.pass = false;
        msg << "bound violated at t=" << r.witness_t << ", s=" << r.witness_s << ": |U| = " << r.witness_norm
            << " > " << r.M * std::exp(-r.delta * (r.witness_t - r.witness_s));
    } else {
        r.pass = true;
        msg << "bound holds on " << r.samples << " samples" << (r.empirical ? " (empirical constants)" : "");
    }
    r.message = msg.str();
    return r;
}

CocycleReport cocycle_residual(const EvolutionFamily& fam, std::size_t triples, double lo, double hi) {
    CocycleReport rep;
    rep.triples = triples;
    for (std::size_t i = 1; i <= triples; ++i) {
        double v[3] = {lo + (hi - lo) * radical_inverse(i, 2), lo + (hi - lo) * radical_inverse(i, 3),
                       lo + (hi - lo) * radical_inverse(i, 5)};
        std::sort(v, v + 3);
        const double r = v[0], s = v[1], t = v[2];
        const double res = operator_norm(fam.propagator(t, s) * fam.propagator(s, r) - fam.propagator(t, r));
        if (res > rep.max_residual) {
            rep.max_residual = res;
            rep.t = t;
            rep.s = s;
            rep.r = r;
        }
    }
    return rep;
}

}  // namespace aafix

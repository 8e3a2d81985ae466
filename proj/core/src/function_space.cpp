#include "aafix/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aafix {

namespace {

// Derivative at local node m of the cubic through four nodes.
double lagrange_slope(const double* x, const Eigen::Ref<const Mat>& y, Eigen::Index row, int m) {
    double slope = 0.0;
    for (int j = 0; j < 4; ++j) {
        double w = 0.0;
        if (j == m) {
            for (int k = 0; k < 4; ++k)
                if (k != m) w += 1.0 / (x[m] - x[k]);
        } else {
            double num = 1.0, den = 1.0;
            for (int k = 0; k < 4; ++k) {
                if (k != j && k != m) num *= (x[m] - x[k]);
                if (k != j) den *= (x[j] - x[k]);
            }
            w = num / den;
        }
        slope += w * y(row, j);
    }
    return slope;
}

}  // namespace

SampledPath::SampledPath(DomainKind domain, std::vector<double> grid, Mat values, Interpolation interp,
                         TailPolicy tail)
    : domain_(domain), grid_(std::move(grid)), values_(std::move(values)), interp_(interp), tail_(std::move(tail)) {
    build();
}

SampledPath SampledPath::from_function(DomainKind domain, std::vector<double> grid,
                                       const std::function<Vec(double)>& fn, Interpolation interp,
                                       TailPolicy tail) {
    if (grid.empty()) throw Error("SampledPath: empty grid");
    const Vec first = fn(grid.front());
    Mat values(first.size(), static_cast<Eigen::Index>(grid.size()));
    values.col(0) = first;
    for (std::size_t i = 1; i < grid.size(); ++i) values.col(static_cast<Eigen::Index>(i)) = fn(grid[i]);
    return SampledPath(domain, std::move(grid), std::move(values), interp, std::move(tail));
}

SampledPath SampledPath::constant(DomainKind domain, std::vector<double> grid, const Vec& value,
                                  Interpolation interp, TailPolicy tail) {
    Mat values = value.replicate(1, static_cast<Eigen::Index>(grid.size()));
    return SampledPath(domain, std::move(grid), std::move(values), interp, std::move(tail));
}

void SampledPath::build() {
    if (grid_.empty()) throw Error("SampledPath: empty grid");
    if (values_.cols() != static_cast<Eigen::Index>(grid_.size()))
        throw Error("SampledPath: value count does not match grid size");
    if (values_.rows() < 1) throw Error("SampledPath: dimension must be at least 1");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i])) throw Error("SampledPath: non-finite grid time");
        if (i > 0 && !(grid_[i] > grid_[i - 1])) throw Error("SampledPath: grid must be strictly increasing");
    }
    if (!values_.allFinite()) throw Error("SampledPath: non-finite value");

    const std::size_t n = grid_.size();
    uniform_ = false;
    if (n >= 2) {
        step_ = (grid_.back() - grid_.front()) / static_cast<double>(n - 1);
        uniform_ = true;
        for (std::size_t i = 1; i < n && uniform_; ++i)
            if (std::abs((grid_[i] - grid_[i - 1]) - step_) > 1e-9 * step_) uniform_ = false;
    }

    second_.resize(0, 0);
    if (interp_ != Interpolation::cubic || n < 4) return;

    const auto d = values_.rows();
    const auto N = static_cast<Eigen::Index>(n);
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = grid_[i + 1] - grid_[i];

    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0);
    Mat rhs(d, N);
    diag[0] = 2.0 * h[0];
    sup[0] = h[0];
    sub[n - 1] = h[n - 2];
    diag[n - 1] = 2.0 * h[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        sub[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i];
    }
    const double* xl = grid_.data();
    const double* xr = grid_.data() + (n - 4);
    for (Eigen::Index r = 0; r < d; ++r) {
        const double s0 = lagrange_slope(xl, values_.block(0, 0, d, 4), r, 0);
        const double s1 = lagrange_slope(xr, values_.block(0, N - 4, d, 4), r, 3);
        rhs(r, 0) = 6.0 * ((values_(r, 1) - values_(r, 0)) / h[0] - s0);
        rhs(r, N - 1) = 6.0 * (s1 - (values_(r, N - 1) - values_(r, N - 2)) / h[n - 2]);
        for (Eigen::Index i = 1; i + 1 < N; ++i) {
            const auto k = static_cast<std::size_t>(i);
            rhs(r, i) = 6.0 * ((values_(r, i + 1) - values_(r, i)) / h[k] -
                               (values_(r, i) - values_(r, i - 1)) / h[k - 1]);
        }
    }
    // Thomas algorithm, shared factorisation across components.
    std::vector<double> cp(n, 0.0);
    cp[0] = sup[0] / diag[0];
    rhs.col(0) /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag[i] - sub[i] * cp[i - 1];
        cp[i] = sup[i] / m;
        const auto ii = static_cast<Eigen::Index>(i);
        rhs.col(ii) = (rhs.col(ii) - sub[i] * rhs.col(ii - 1)) / m;
    }
    for (Eigen::Index i = N - 2; i >= 0; --i)
        rhs.col(i) -= cp[static_cast<std::size_t>(i)] * rhs.col(i + 1);
    second_ = std::move(rhs);
}

std::size_t SampledPath::locate(double t) const {
    const std::size_t n = grid_.size();
    if (n < 2) return 0;
    std::size_t i;
    if (uniform_) {
        const double f = std::floor((t - grid_.front()) / step_);
        i = f <= 0.0 ? 0 : std::min(static_cast<std::size_t>(f), n - 2);
        while (i > 0 && t < grid_[i]) --i;
        while (i + 2 < n && t > grid_[i + 1]) ++i;
    } else {
        auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
        i = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
        i = std::min(i, n - 2);
    }
    return i;
}

void SampledPath::interpolate_into(double t, Eigen::Ref<Vec> out) const {
    const std::size_t n = grid_.size();
    if (n == 1) {
        out = values_.col(0);
        return;
    }
    const std::size_t i = locate(t);
    const auto ii = static_cast<Eigen::Index>(i);
    if (t == grid_[i]) {
        out = values_.col(ii);
        return;
    }
    if (t == grid_[i + 1]) {
        out = values_.col(ii + 1);
        return;
    }
    const double h = grid_[i + 1] - grid_[i];
    const double b = (t - grid_[i]) / h;
    const double a = (grid_[i + 1] - t) / h;
    out = a * values_.col(ii) + b * values_.col(ii + 1);
    if (second_.cols() > 0)
        out += ((a * a * a - a) * second_.col(ii) + (b * b * b - b) * second_.col(ii + 1)) * (h * h / 6.0);
}

bool SampledPath::covers(double t) const {
    if (t >= grid_.front() && t <= grid_.back()) return true;
    if (tail_.kind != TailKind::error) return true;
    const std::size_t n = grid_.size();
    if (t < grid_.front()) {
        const double grace = tail_.grace >= 0.0 ? tail_.grace : (n > 1 ? grid_[1] - grid_[0] : 0.0);
        return grid_.front() - t <= grace;
    }
    const double grace = tail_.grace >= 0.0 ? tail_.grace : (n > 1 ? grid_[n - 1] - grid_[n - 2] : 0.0);
    return t - grid_.back() <= grace;
}

void SampledPath::evaluate_into(double t, Eigen::Ref<Vec> out) const {
    if (t >= grid_.front() && t <= grid_.back()) {
        interpolate_into(t, out);
        return;
    }
    const bool below = t < grid_.front();
    const auto end = below ? Eigen::Index{0} : values_.cols() - 1;
    const double dist = below ? grid_.front() - t : t - grid_.back();
    switch (tail_.kind) {
        case TailKind::constant_extend:
            out = values_.col(end);
            return;
        case TailKind::decay_to_anchor: {
            const double w = std::exp(-tail_.decay_rate * dist);
            if (tail_.anchor.size() == 0) {
                out = w * values_.col(end);
            } else {
                out = tail_.anchor + w * (values_.col(end) - tail_.anchor);
            }
            return;
        }
        case TailKind::error:
            if (covers(t)) {
                out = values_.col(end);
                return;
            }
            std::ostringstream msg;
            msg << "SampledPath: t=" << t << " outside [" << grid_.front() << ", " << grid_.back() << "]";
            throw DomainError(msg.str());
    }
}

Vec SampledPath::evaluate(double t) const {
    Vec out(values_.rows());
    evaluate_into(t, out);
    return out;
}

SampledPath SampledPath::with_tail(TailPolicy tail) const {
    SampledPath copy = *this;
    copy.tail_ = std::move(tail);
    return copy;
}

SampledPath SampledPath::with_interpolation(Interpolation interp) const {
    return SampledPath(domain_, grid_, values_, interp, tail_);
}

SampledPath SampledPath::with_values(Mat values) const {
    return SampledPath(domain_, grid_, std::move(values), interp_, tail_);
}

SampledPath SampledPath::restricted(double a, double b) const {
    std::vector<double> g;
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < grid_.size(); ++i)
        if (grid_[i] >= a && grid_[i] <= b) {
            g.push_back(grid_[i]);
            idx.push_back(static_cast<Eigen::Index>(i));
        }
    if (g.empty()) throw DomainError("SampledPath::restricted: no nodes in window");
    Mat v(values_.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = values_.col(idx[k]);
    return SampledPath(domain_, std::move(g), std::move(v), interp_, tail_);
}

double sup_norm(const SampledPath& p) {
    if (p.empty()) throw Error("sup_norm: empty grid");
    return p.values().colwise().norm().maxCoeff();
}

double sup_distance(const SampledPath& p, const SampledPath& q) {
    if (p.size() != q.size() || p.dim() != q.dim()) throw Error("sup_distance: paths do not share a grid");
    return (p.values() - q.values()).colwise().norm().maxCoeff();
}

SampledPath axpy(const SampledPath& p, double scale, const SampledPath& q) {
    if (p.size() != q.size() || p.dim() != q.dim()) throw Error("axpy: paths do not share a grid");
    return p.with_values(p.values() + scale * q.values());
}

std::vector<double> uniform_grid(double a, double b, double h) {
    if (!(h > 0.0) || !(b >= a)) throw Error("uniform_grid: need h > 0 and b >= a");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + static_cast<double>(i) * h;
    return g;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {a};
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = b;
    return g;
}

double aaa_norm(const AAADecomposition& g) { return sup_norm(g.principal) + sup_norm(g.ergodic); }

TimeWarp TimeWarp::shift(double tau) {
    TimeWarp w;
    w.kind_ = tau == 0.0 ? Kind::identity : Kind::shift;
    w.tau_ = tau;
    return w;
}

TimeWarp TimeWarp::tabulated(SampledPath table) {
    if (table.dim() != 1) throw Error("TimeWarp::tabulated: table must be scalar");
    TimeWarp w;
    w.kind_ = Kind::tabulated;
    w.table_ = table.with_interpolation(Interpolation::linear);
    return w;
}

TimeWarp TimeWarp::custom(std::function<double(double)> fn, std::string label) {
    TimeWarp w;
    w.kind_ = Kind::custom;
    w.fn_ = std::move(fn);
    w.label_ = std::move(label);
    return w;
}

double TimeWarp::operator()(double t) const {
    switch (kind_) {
        case Kind::identity: return t;
        case Kind::shift: return t + tau_;
        case Kind::tabulated: return table_->evaluate(t)(0);
        case Kind::custom: return fn_(t);
    }
    return t;
}

std::string TimeWarp::describe() const {
    std::ostringstream s;
    switch (kind_) {
        case Kind::identity: s << "identity"; break;
        case Kind::shift: s << "shift(" << tau_ << ")"; break;
        case Kind::tabulated: s << "tabulated(" << table_->size() << " nodes)"; break;
        case Kind::custom: s << label_; break;
    }
    return s.str();
}

SampledPath warp_compose(const SampledPath& p, const TimeWarp& a) {
    if (a.is_identity()) return p;
    return warp_compose(p, a, p.grid_vector());
}

SampledPath warp_compose(const SampledPath& p, const TimeWarp& a, std::vector<double> out_grid) {
    Mat values(p.dim(), static_cast<Eigen::Index>(out_grid.size()));
    for (std::size_t i = 0; i < out_grid.size(); ++i) {
        const double at = a(out_grid[i]);
        if (!p.covers(at)) {
            std::ostringstream msg;
            msg << "warp_compose: warp " << a.describe() << " maps t=" << out_grid[i] << " to " << at
                << ", outside the evaluable domain";
            throw DomainError(msg.str());
        }
        p.evaluate_into(at, values.col(static_cast<Eigen::Index>(i)));
    }
    return SampledPath(p.domain(), std::move(out_grid), std::move(values), p.interpolation(), p.tail());
}

EpsilonNet range_epsilon_net(const SampledPath& p, double eps) { return range_epsilon_net(p.values(), eps); }

EpsilonNet range_epsilon_net(const Mat& samples, double eps) {
    if (!(eps > 0.0)) throw Error("range_epsilon_net: eps must be positive");
    EpsilonNet net;
    const Eigen::Index n = samples.cols();
    if (n == 0) return net;

    Eigen::Index start = 0;
    samples.colwise().norm().maxCoeff(&start);  // Eigen returns the first maximiser
    std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());

    Eigen::Index next = start;
    for (;;) {
        net.points.push_back(samples.col(next));
        net.source_index.push_back(static_cast<std::size_t>(next));
        const auto c = samples.col(next);
        double worst = -1.0;
        Eigen::Index arg = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            auto& dj = dist[static_cast<std::size_t>(j)];
            dj = std::min(dj, (samples.col(j) - c).norm());
            if (dj > worst) {
                worst = dj;
                arg = j;
            }
        }
        net.covering_radius = worst;
        if (worst <= eps) break;
        next = arg;
    }
    return net;
}

}  // namespace aafix

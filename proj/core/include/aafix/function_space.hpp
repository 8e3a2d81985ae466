#pragma once

// Sampled vector-valued functions of time, their norms, time warps and
// range coverings.

#include "aafix/common.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace aafix {

enum class DomainKind { full_line, half_line };
enum class Interpolation { linear, cubic };
enum class TailKind { constant_extend, decay_to_anchor, error };

/// Rule for evaluating a path beyond its grid.
///
/// `error` still serves points within `grace` of the grid ends (one grid
/// step at that end when grace is negative) by constant extension.
struct TailPolicy {
    TailKind kind = TailKind::error;
    double decay_rate = 1.0;  // decay_to_anchor only
    Vec anchor;               // decay_to_anchor; empty means zero
    double grace = -1.0;

    static TailPolicy constant_extend() { return {TailKind::constant_extend, 1.0, {}, -1.0}; }
    static TailPolicy error() { return {TailKind::error, 1.0, {}, -1.0}; }
    static TailPolicy decay_to_anchor(double rate, Vec anchor = {}) {
        return {TailKind::decay_to_anchor, rate, std::move(anchor), -1.0};
    }
};

/// A function R (or R+) -> R^d known on a strictly increasing grid.
///
/// Values are stored column-wise (d x n). Cubic interpolation is a clamped
/// spline whose end slopes come from the cubic through the four nearest nodes;
/// grids with fewer than four nodes fall back to linear.
class SampledPath {
public:
    SampledPath() = default;
    SampledPath(DomainKind domain, std::vector<double> grid, Mat values,
                Interpolation interp = Interpolation::cubic,
                TailPolicy tail = TailPolicy::error());

    static SampledPath from_function(DomainKind domain, std::vector<double> grid,
                                     const std::function<Vec(double)>& fn,
                                     Interpolation interp = Interpolation::cubic,
                                     TailPolicy tail = TailPolicy::error());
    static SampledPath constant(DomainKind domain, std::vector<double> grid, const Vec& value,
                                Interpolation interp = Interpolation::cubic,
                                TailPolicy tail = TailPolicy::constant_extend());

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(values_.rows()); }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }
    [[nodiscard]] bool empty() const noexcept { return grid_.empty(); }
    [[nodiscard]] std::span<const double> grid() const noexcept { return grid_; }
    [[nodiscard]] const std::vector<double>& grid_vector() const noexcept { return grid_; }
    [[nodiscard]] const Mat& values() const noexcept { return values_; }
    [[nodiscard]] Vec value(std::size_t i) const { return values_.col(static_cast<Eigen::Index>(i)); }
    [[nodiscard]] double t_min() const { return grid_.front(); }
    [[nodiscard]] double t_max() const { return grid_.back(); }
    [[nodiscard]] DomainKind domain() const noexcept { return domain_; }
    [[nodiscard]] Interpolation interpolation() const noexcept { return interp_; }
    [[nodiscard]] const TailPolicy& tail() const noexcept { return tail_; }

    /// Interpolated value; exact at grid nodes. Throws DomainError when the
    /// tail policy refuses t.
    [[nodiscard]] Vec evaluate(double t) const;
    void evaluate_into(double t, Eigen::Ref<Vec> out) const;
    [[nodiscard]] bool covers(double t) const;

    [[nodiscard]] SampledPath with_tail(TailPolicy tail) const;
    [[nodiscard]] SampledPath with_interpolation(Interpolation interp) const;
    /// Same grid, values replaced. Spline data are rebuilt.
    [[nodiscard]] SampledPath with_values(Mat values) const;
    /// Restriction to the nodes in [a, b].
    [[nodiscard]] SampledPath restricted(double a, double b) const;

private:
    void build();
    [[nodiscard]] std::size_t locate(double t) const;
    void interpolate_into(double t, Eigen::Ref<Vec> out) const;

    DomainKind domain_ = DomainKind::full_line;
    std::vector<double> grid_;
    Mat values_;
    Interpolation interp_ = Interpolation::cubic;
    TailPolicy tail_;
    Mat second_;  // spline second derivatives, d x n
    bool uniform_ = false;
    double step_ = 0.0;
};

/// max over the grid of the Euclidean norm of the values.
double sup_norm(const SampledPath& p);

/// sup-norm of p - q on a shared grid.
double sup_distance(const SampledPath& p, const SampledPath& q);

/// Nodewise p + scale * q on a shared grid; keeps p's metadata.
SampledPath axpy(const SampledPath& p, double scale, const SampledPath& q);

/// Uniform grid a, a+h, ..., b (b included when it lands within 1e-9 h).
std::vector<double> uniform_grid(double a, double b, double h);
std::vector<double> linspace(double a, double b, std::size_t n);

/// g = principal + ergodic with principal on R and ergodic vanishing at +inf.
struct AAADecomposition {
    SampledPath principal;
    SampledPath ergodic;
};

/// sup-norm(principal) + sup-norm(ergodic).
double aaa_norm(const AAADecomposition& g);

/// Time reparametrisation t -> a(t) used for delayed/advanced state arguments.
class TimeWarp {
public:
    enum class Kind { identity, shift, tabulated, custom };

    TimeWarp() = default;
    static TimeWarp identity() { return TimeWarp{}; }
    /// a(t) = t + tau.
    static TimeWarp shift(double tau);
    /// a given by a scalar path (linear interpolation).
    static TimeWarp tabulated(SampledPath table);
    static TimeWarp custom(std::function<double(double)> fn, std::string label = "custom");

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double tau() const noexcept { return tau_; }
    [[nodiscard]] bool is_identity() const noexcept { return kind_ == Kind::identity; }
    [[nodiscard]] std::string describe() const;

private:
    Kind kind_ = Kind::identity;
    double tau_ = 0.0;
    std::optional<SampledPath> table_;
    std::function<double(double)> fn_;
    std::string label_;
};

/// q(t) = p(a(t)) on p's grid.
SampledPath warp_compose(const SampledPath& p, const TimeWarp& a);
/// q(t) = p(a(t)) on an explicit output grid.
SampledPath warp_compose(const SampledPath& p, const TimeWarp& a, std::vector<double> out_grid);

struct EpsilonNet {
    std::vector<Vec> points;
    std::vector<std::size_t> source_index;  // sample index each net point came from
    double covering_radius = 0.0;           // max distance of a sample to the net
    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Greedy farthest-point net of the sampled values.
///
/// The first point is the sample of largest norm; each subsequent point is
/// the sample farthest from the current net. Ties go to the earliest index.
/// Stops once every sample lies within eps of the net.
EpsilonNet range_epsilon_net(const SampledPath& p, double eps);
EpsilonNet range_epsilon_net(const Mat& samples, double eps);

}  // namespace aafix

#pragma once

// Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals,
// and the envelope constants built from it.

#include "aafix/common.hpp"

#include <functional>
#include <string>
#include <vector>

namespace aafix {

enum class Orientation { delayed, advanced, half_line_delayed };

std::string to_string(Orientation o);

/// Bound b(u) >= |g| at distance u from the anchor time, used to truncate
/// semi-infinite integrals.
///
/// exponential: c e^{-rate u}.  gaussian: c e^{-(u/width)^2}.
/// probe: no analytic bound; the tail is sized by doubling until the
/// integrand's contribution is negligible.
struct TailBound {
    enum class Kind { exponential, gaussian, probe };
    Kind kind = Kind::probe;
    double c = 0.0;
    double rate = 1.0;   // exponential rate, or gaussian width

    static TailBound exponential(double c, double rate);
    static TailBound gaussian(double c, double width);
    static TailBound probe() { return {}; }

    [[nodiscard]] double bound(double u) const;
    /// Integral of the bound over [T, inf).
    [[nodiscard]] double tail_integral(double T) const;
    /// Smallest T >= 0 with tail_integral(T) <= eps.
    [[nodiscard]] double truncation(double eps) const;
    [[nodiscard]] std::string describe() const;
};

struct QuadOptions {
    double tol = 1e-10;
    double panel_width = 1.0;      // initial panel size
    int max_subdivisions = 20000;
    double max_span = 1e6;         // probe tails give up beyond this
};

struct QuadResult {
    Vec value;
    double error_estimate = 0.0;   // quadrature part
    double truncation = 0.0;       // distance from anchor to the cut
    double tail_bound = 0.0;       // bound on the discarded tail
    int evaluations = 0;
};

using VecIntegrand = std::function<Vec(double)>;
using ScalarIntegrand = std::function<double(double)>;

/// Integral over [a, b] with global adaptive G7-K15 panels.
QuadResult integrate_interval(const VecIntegrand& g, double a, double b, const QuadOptions& opt = {});
double integrate_interval(const ScalarIntegrand& g, double a, double b, const QuadOptions& opt = {});

/// Integral of g over (-inf, t]; tail dominates |g(s)| as a function of t-s.
QuadResult integrate_delayed(const VecIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt = {});
double integrate_delayed(const ScalarIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt = {});

/// Integral of g over [t, inf); tail dominates |g(s)| as a function of s-t.
QuadResult integrate_advanced(const VecIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt = {});
double integrate_advanced(const ScalarIntegrand& g, double t, const TailBound& tail, const QuadOptions& opt = {});

/// Nonnegative two-time function with a decay bound in |t-s|.
struct TwoTimeEnvelope {
    std::function<double(double, double)> fn;
    TailBound tail;
    std::string label;

    [[nodiscard]] explicit operator bool() const noexcept { return static_cast<bool>(fn); }
    [[nodiscard]] double operator()(double t, double s) const { return fn(t, s); }
};

/// Integral of env(t, .) over the oriented s-range at one t.
double oriented_integral(const TwoTimeEnvelope& env, Orientation o, double t, const QuadOptions& opt = {});

/// A sup over a finite t-grid, with the data that produced it.
struct EnvelopeValue {
    double value = 0.0;
    double argmax = 0.0;
    std::size_t grid_points = 0;
    double grid_min = 0.0;
    double grid_max = 0.0;
    double tol = 0.0;
    bool computed = false;
    std::string note;
};

/// max over t_grid of the oriented integral of env.
///
/// Throws DivergenceError when the declared tail does not dominate env
/// beyond the truncation point.
EnvelopeValue envelope_constant(const TwoTimeEnvelope& env, Orientation o, const std::vector<double>& t_grid,
                                double tol = 1e-10);

/// Generic sup of a scalar function over a grid.
EnvelopeValue grid_sup(const std::function<double(double)>& fn, const std::vector<double>& t_grid,
                       double tol = 0.0);

struct EnvelopeConstants {
    EnvelopeValue alpha1, alpha2;       // sup_t of int lambda_i
    EnvelopeValue N1, N2;               // sup_t of int mu_i
    EnvelopeValue beta1_H5, beta2_H5;   // sup_t of int nu_i
    EnvelopeValue P1, P2;               // sup_t of int theta_i
    EnvelopeValue Q1;                   // sup_t of the summed ergodic Lipschitz integrals
    EnvelopeValue gamma1, gamma2;       // sup_t of |int B_i(t,s,0,0) ds|
    EnvelopeValue C_B;                  // sup_s of int_0^s |B(s,r)| dr
};

/// Values of fn along an increasing sequence, for limits that can only be
/// observed as trends.
struct TrendReport {
    std::vector<double> points;
    std::vector<double> values;
    bool non_increasing = false;
    double last = 0.0;
    bool below_tol = false;
};

TrendReport limit_trend(const std::function<double(double)>& fn, const std::vector<double>& points, double tol);

}  // namespace aafix

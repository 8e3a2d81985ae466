#pragma once

// Two-time kernels C(t,s,x,y) with their envelopes and Lipschitz moduli,
// and sampling checks of the structural inequalities they declare.

#include "aafix/quadrature.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace aafix {

using KernelFn = std::function<Vec(double t, double s, const Vec& x, const Vec& y)>;

/// C(t,s,x,y) = Theta(t-s) * fhat(s,x,y).
struct ConvolutionForm {
    std::function<double(double)> theta;
    std::function<Vec(double, const Vec&, const Vec&)> fhat;
};

struct KernelSpec {
    std::string name;
    int dim = 1;
    KernelFn eval;
    Orientation orientation = Orientation::delayed;
    TwoTimeEnvelope lambda;        // bound on |C(t+tau, s+tau, x, y)| over the bounded set
    TwoTimeEnvelope mu;            // Lipschitz modulus in (x, y)
    std::optional<TwoTimeEnvelope> limit_mu;   // modulus of the limit kernel, when known
    std::optional<ConvolutionForm> convolution;
    double bound_radius = 1.0;     // radius of the bounded set lambda is declared for

    [[nodiscard]] Vec operator()(double t, double s, const Vec& x, const Vec& y) const { return eval(t, s, x, y); }
    [[nodiscard]] Vec at_zero(double t, double s) const;
};

/// B = aa_part + ergodic, with |ergodic(t,s,x,y)| <= theta(t,s) * bhat(s,x,y).
struct SplitKernelSpec {
    std::string name;
    KernelSpec aa_part;            // its mu plays the role of nu
    KernelFn ergodic;
    TwoTimeEnvelope theta;
    std::function<double(double, const Vec&, const Vec&)> bhat;
    TwoTimeEnvelope mu3;           // Lipschitz modulus of the ergodic part
    std::optional<TwoTimeEnvelope> vartheta;  // bound on |aa_part(t,s,0,0)|
    KernelFn full;                 // optional; defaults to aa_part + ergodic

    [[nodiscard]] int dim() const noexcept { return aa_part.dim; }
    [[nodiscard]] Orientation orientation() const noexcept { return aa_part.orientation; }
    [[nodiscard]] Vec operator()(double t, double s, const Vec& x, const Vec& y) const;
    /// Lipschitz modulus of the whole kernel: nu + mu3.
    [[nodiscard]] TwoTimeEnvelope total_mu() const;
    /// Envelope of the whole kernel: lambda of the aa part + theta * sup bhat.
    [[nodiscard]] TwoTimeEnvelope total_lambda(double bhat_sup) const;
};

/// View of a split kernel as a plain KernelSpec (full evaluator, total moduli).
KernelSpec as_kernel(const SplitKernelSpec& k, double bhat_sup);

/// Deterministic sampling plan for the structural checks.
struct SamplePlan {
    std::vector<double> taus{-37.1, -5.3, 0.0, 2.9, 11.7};
    std::vector<double> times{-10.0, -3.5, -1.0, 0.0, 0.8, 2.4, 6.0, 13.0};
    std::vector<double> lags{0.0, 0.05, 0.3, 1.0, 2.5, 6.0};
    int state_samples = 24;        // Halton points in the ball, plus extremes
    double radius = 1.0;

    [[nodiscard]] std::string describe() const;
    /// Sample (t, s) pairs for an orientation (half-line pairs keep s >= 0).
    [[nodiscard]] std::vector<std::pair<double, double>> pairs(Orientation o) const;
    /// Sample states (x, y) in the ball of the plan's radius.
    [[nodiscard]] std::vector<std::pair<Vec, Vec>> states(int dim) const;
};

struct SampleWitness {
    double tau = 0.0, t = 0.0, s = 0.0;
    Vec x, y, x2, y2;
};

struct KernelCheckReport {
    std::string check;
    double max_violation = -std::numeric_limits<double>::infinity();
    SampleWitness witness;
    std::size_t samples = 0;
    bool pass = false;
    std::string plan;
    std::string note;
};

/// max over samples of |C(t+tau, s+tau, x, y)| - lambda(t, s).
KernelCheckReport check_lambda_bound(const KernelSpec& k, const SamplePlan& plan);
/// max over sample pairs of |C(u) - C(v)| - mu(t,s) (|u1-v1| + |u2-v2|).
KernelCheckReport check_lipschitz(const KernelSpec& k, const SamplePlan& plan);
/// Same for the limit modulus; reports "not checked" when none is supplied.
KernelCheckReport check_limit_lipschitz(const KernelSpec& k, const KernelFn& limit_kernel, const SamplePlan& plan);
/// max |C - Theta * fhat| over samples; pass when within rounding.
KernelCheckReport check_convolution_form(const KernelSpec& k, const SamplePlan& plan);

struct SplitCheckReport {
    double split_residual = 0.0;
    SampleWitness split_witness;
    double envelope_violation = -std::numeric_limits<double>::infinity();
    SampleWitness envelope_witness;
    std::size_t samples = 0;
    bool pass = false;
};

SplitCheckReport check_split_consistency(const SplitKernelSpec& k, const SamplePlan& plan);

/// Admissible violation for a bound of size `scale` under rounding.
double rounding_slack(double scale);

}  // namespace aafix

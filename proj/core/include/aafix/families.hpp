#pragma once

// Built-in kernel and nonlinearity families selectable by name from configs.

#include "aafix/kernels.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>

namespace aafix {

/// psi(t) = sin(1 / (2 + cos t + cos(sqrt(2) t))), the classical almost
/// automorphic but not almost periodic function.
double psi(double t);

/// Scalar time forcing amplitude * phi(frequency * t + phase).
struct Forcing {
    enum class Kind { zero, constant, sin, cos, psi, sin_plus_decay };
    Kind kind = Kind::zero;
    double amplitude = 1.0;
    double frequency = 1.0;
    double phase = 0.0;
    double decay = 1.0;        // sin_plus_decay: amplitude (sin + e^{-decay t})
    int component = -1;        // -1: every component

    [[nodiscard]] double scalar(double t) const;
    [[nodiscard]] Vec operator()(double t, int dim) const;
    /// Analytic bound on sup_t |scalar(t)| (1-norm bound for sin_plus_decay on t >= 0).
    [[nodiscard]] double sup_bound() const;
    [[nodiscard]] std::string describe() const;
};

Forcing::Kind forcing_kind_from_string(const std::string& name);
std::string to_string(Forcing::Kind k);

/// f(t, x, y) with x the current state and y the warped state.
struct Nonlinearity {
    std::string name = "zero";
    int dim = 1;
    std::function<Vec(double, const Vec&, const Vec&)> eval;
    std::optional<double> lipschitz;                  // analytic L_f
    std::function<double(double)> lipschitz_curve;    // L_f(r) on the ball of radius r
    Forcing forcing;                                  // f(t, 0, 0)

    [[nodiscard]] Vec operator()(double t, const Vec& x, const Vec& y) const { return eval(t, x, y); }
    [[nodiscard]] double lipschitz_on(double r) const;
};

enum class StateMap { linear, tanh };

struct NonlinearityParams {
    std::string family = "linear";   // linear | tanh | quadratic | zero
    int dim = 1;
    Forcing forcing;
    double a = 0.0;                  // coefficient on x
    double b = 0.0;                  // coefficient on y
    // declared L_f(r) = l0 + l1 / (1 + r) + l2 r; overrides the family curve when set
    std::optional<std::array<double, 3>> declared_curve;
};

Nonlinearity make_nonlinearity(const NonlinearityParams& p);

struct KernelParams {
    std::string family = "exp_decay";  // exp_decay | gauss_decay | conv_sinusoid | zero
    int dim = 1;
    Orientation orientation = Orientation::delayed;
    double coeff = 0.0;
    double rate = 1.0;                 // exponential rate or gaussian width
    double wx = 1.0;
    double wy = 0.0;
    StateMap map = StateMap::linear;
    double bias = 0.0;                 // state-independent part: bias * decay(|t-s|) per component
    double amp = 0.0;                  // conv_sinusoid: 1 + amp sin(freq s)
    double freq = 1.0;
    double radius = 1.0;               // bounded set for lambda
};

KernelSpec make_kernel(const KernelParams& p);

struct SplitKernelParams {
    KernelParams aa;                   // family must be exp_decay or gauss_decay
    double ergodic_coeff = 0.0;        // c_e e^{-decay t} decay(|t-s|) (...)
    double ergodic_decay = 1.0;
    double ergodic_bias = 0.0;
};

SplitKernelSpec make_split_kernel(const SplitKernelParams& p);

StateMap state_map_from_string(const std::string& name);
Orientation orientation_from_string(const std::string& name);

}  // namespace aafix

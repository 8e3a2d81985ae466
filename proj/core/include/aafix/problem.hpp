#pragma once

// Problem description shared by the certifier, the operators and the solver.

#include "aafix/evolution.hpp"
#include "aafix/families.hpp"
#include "aafix/function_space.hpp"
#include "aafix/kernels.hpp"
#include "aafix/resolvent.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aafix {

/// advanced_delayed:   y = f(t, y, y(a0)) + int_{-inf}^t C1 + int_t^{inf} C2
/// delayed_only:       the same without C2
/// half_line:          y = f(t, y, y(b0)) + int_0^t B1 + int_t^{inf} B2 on t >= 0
/// evolution_nonlocal: y = U(t,0)(u0 + g(y)) + int_0^t U(t,s) F(s, y, By) ds
/// resolvent_nonlocal: y = R(t)(u0 + g(y)) + int_0^t R(t-s) f(s, y) ds
/// delay_parabolic:    x = int_{-inf}^t U(t,s) f(s, x(s - tau)) ds
enum class Variant { advanced_delayed, delayed_only, half_line, evolution_nonlocal, resolvent_nonlocal, delay_parabolic };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

/// g(u) = offset + sum_k w_k u(t_k).
struct NonlocalMap {
    std::vector<double> times;
    std::vector<double> weights;
    Vec offset;                      // g(0); empty means zero

    [[nodiscard]] Vec operator()(const SampledPath& u, int dim) const;
    [[nodiscard]] Vec at_zero(int dim) const;
    [[nodiscard]] double lipschitz() const;
};

/// Bu(t) = int_0^t B(t,s) u(s) ds.
struct CausalOperator {
    std::function<Mat(double, double)> kernel;   // empty means B = 0
    std::string label = "zero";

    [[nodiscard]] bool present() const noexcept { return static_cast<bool>(kernel); }
    /// B(t,s) = coeff e^{-rate (t-s)} I.
    static CausalOperator exponential(int dim, double coeff, double rate);
};

struct ProblemSpec {
    std::string name = "problem";
    Variant variant = Variant::advanced_delayed;
    int dim = 1;

    // Integral equations. In the single-argument variants (resolvent,
    // delay) the second slot of f receives zero.
    Nonlinearity f;
    std::optional<KernelSpec> c1, c2;
    std::optional<SplitKernelSpec> b1, b2;
    TimeWarp a0, a1, a2;
    bool warps_declared_aa = false;  // tabulated/custom warps preserve AA

    // Evolution and resolvent data.
    std::shared_ptr<const EvolutionFamily> family;
    std::optional<StabilityReport> stability;
    std::shared_ptr<const ResolventOperator> resolvent;
    Vec u0;
    NonlocalMap g;
    CausalOperator causal;
    double delay_tau = 0.0;

    // Numerics.
    double t_min = -40.0;
    double t_max = 40.0;
    double step = 0.05;
    double quad_tol = 1e-8;          // inside operator applications
    double constants_tol = 1e-10;    // envelope constants
    std::vector<double> sup_grid;    // t-grid for sups; default spans the window
    double slack = 1e-9;
    SamplePlan plan;

    [[nodiscard]] DomainKind domain() const noexcept;
    [[nodiscard]] std::vector<double> grid() const;
    [[nodiscard]] std::vector<double> sup_t_grid() const;
    [[nodiscard]] Vec initial_state() const;
    /// Stability constants (M, delta) of the family or resolvent.
    [[nodiscard]] std::pair<double, double> stability_constants() const;
    void validate() const;
};

}  // namespace aafix

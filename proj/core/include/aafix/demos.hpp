#pragma once

// The two application problems: heat conduction with memory (resolvent form)
// and a semilinear evolution equation with finite delay.

#include "aafix/certifier.hpp"
#include "aafix/problem.hpp"
#include "aafix/resolvent.hpp"
#include "aafix/solver.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aafix {

/// alpha(t) = alpha0 (1 - kappa + kappa e^{-rate t}); kappa = 1 is the plain
/// exponential family.
struct Relaxation {
    double value0 = 1.0;
    double rate = 1.0;
    double kappa = 1.0;

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] double d1(double t) const;
    [[nodiscard]] double d2(double t) const;
};

struct HeatDemoParams {
    int n = 4;                           // interior points of the unit interval
    Relaxation alpha{1.0, 1.0, 2e-3};
    Relaxation beta{2.0, 1.0, 2e-3};
    double p = 2.0;                      // q = p / (p - 1)
    double gamma = 0.0;                  // <= 0: 0.9 of the spectral decay rate of A
    Forcing a{Forcing::Kind::sin_plus_decay, 0.0, 1.0, 0.0, 1.0, -1};
    double b0 = 0.0;                     // b(theta) = b0 + b1 theta, componentwise
    double b1 = 0.0;
    NonlocalMap h;                       // h(u) = offset + sum w_k u(t_k)
    Vec u0;                              // empty: theta = sin(pi x), eta = 0
    double rho = 0.0;                    // <= 0: the smallest value allowed by the rho inequality
    double t_max = 10.0;
    double step = 0.05;
    // t_max is overwritten; the residual uses a finite-difference derivative
    // of the table, which dominates it for the stiffer stencils
    ResolventOptions resolvent{10.0, 0.005, true, 1e-4};
};

struct ConditionCheck {
    std::string name;
    std::string expression;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct HeatDemo {
    ProblemSpec spec;
    Mat A;                               // [[0, I], [alpha0 Lap_h, -beta0 I]]
    Mat laplacian;
    std::function<Mat(double)> F;        // memory factor, B(t) = F(t) A
    std::function<Mat(double)> B;
    double M = 1.0;                      // |e^{tA}| <= M e^{-gamma t}
    double gamma = 0.0;
    double q = 2.0;
    double a_norm = 0.0;                 // AAA norm of a
    double rho = 0.0;
    double base_norm = 0.0;
    std::vector<ConditionCheck> checks;  // R1, R2, rho inequality, Lipschitz conditions
    DecayTable decay;
    bool flagged = false;                // some condition failed
    std::vector<std::string> notes;

    [[nodiscard]] const ConditionCheck* find(const std::string& name) const;
};

/// Discretises the problem, builds the resolvent, fits (M, gamma) and audits
/// the conditions. Failed conditions flag the result but do not throw.
HeatDemo heat_demo_assemble(const HeatDemoParams& params);

/// Augmented state for the relaxation family: the memory integrals become
/// extra unknowns, so R(t) u0 is the first block of e^{t G} (u0, 0).
Mat heat_demo_augmented_generator(const HeatDemoParams& params);

struct DelayDemoParams {
    std::shared_ptr<const EvolutionFamily> family;   // empty: A(t) = -1, d = 1
    std::optional<std::pair<double, double>> stability;  // declared (M, delta); empty: fitted
    Nonlinearity f;                                   // empty eval: sin s + kappa x
    double kappa = 0.2;
    double tau = 3.141592653589793;
    double tol = 1e-8;
    double t_min = -60.0;                            // history before t_min is held constant; allow burn-in
    double t_max = 20.0;
    double step = 0.05;
    double quad_tol = 1e-9;
    std::optional<TheoremId> theorem;
    bool allow_uncertified = false;
};

struct DelayDemo {
    ProblemSpec spec;
    ContractionCertificate certificate;
    SolverReport report;
};

ProblemSpec delay_demo_spec(const DelayDemoParams& params);
DelayDemo delay_demo_solve(const DelayDemoParams& params);

}  // namespace aafix

#pragma once

// Evolution families U(t,s) generated by x' = A(t) x, their stability
// constants and cocycle checks.

#include "aafix/common.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aafix {

struct PropagationOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double initial_step = 1e-3;
    std::size_t max_steps = 2'000'000;
};

/// Declared (not verified) parabolic-regularity data of the generator family.
struct ATMetadata {
    double lambda0 = 0.0;
    double sector_angle = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    double holder1 = 0.0;
    double holder2 = 0.0;
};

class EvolutionFamily {
public:
    using Generator = std::function<Mat(double)>;

    EvolutionFamily(int dim, Generator A, std::string label, PropagationOptions opt = {});
    static EvolutionFamily constant(const Mat& A, std::string label = "constant");
    /// A(t) = -(base + amplitude * sin(frequency t)) I.
    static EvolutionFamily scalar_sinusoid(int dim, double base, double amplitude, double frequency);
    /// A(t) = -(base + amplitude * psi(t)) I.
    static EvolutionFamily scalar_psi(int dim, double base, double amplitude);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] Mat generator(double t) const { return A_(t); }
    [[nodiscard]] const PropagationOptions& options() const noexcept { return opt_; }

    /// U(t,s) x for t >= s.
    [[nodiscard]] Vec propagate(double t, double s, const Vec& x) const;
    /// The matrix U(t,s).
    [[nodiscard]] Mat propagator(double t, double s) const;
    /// Solves w' = A(r) w + h(r), w(s) = w0, and returns w at each of the
    /// ascending times (all >= s), one column per time.
    [[nodiscard]] Mat propagate_forced(double s, const Vec& w0, const std::vector<double>& times,
                                       const std::function<Vec(double)>& h) const;

    std::optional<ATMetadata> at;

private:
    int dim_;
    Generator A_;
    std::string label_;
    PropagationOptions opt_;
};

struct StabilityPlan {
    std::vector<double> starts;     // s values
    std::vector<double> lags;       // t - s values
    static StabilityPlan standard(double window = 20.0, double max_lag = 10.0);
};

struct StabilityReport {
    double M = 0.0;
    double delta = 0.0;
    bool pass = false;
    bool empirical = false;          // constants fitted rather than declared
    double worst_slack = 0.0;        // min of M e^{-delta (t-s)} - |U(t,s)|
    double witness_t = 0.0;
    double witness_s = 0.0;
    double witness_norm = 0.0;
    std::size_t samples = 0;
    std::string message;
};

/// Checks |U(t,s)| <= M e^{-delta (t-s)} on the plan. With no candidate the
/// smallest decay rate seen at long lags is taken as delta and M fitted to it.
StabilityReport certify_stability(const EvolutionFamily& fam, const StabilityPlan& plan,
                                  std::optional<std::pair<double, double>> candidate = std::nullopt);

struct CocycleReport {
    double max_residual = 0.0;
    double t = 0.0, s = 0.0, r = 0.0;
    std::size_t triples = 0;
};

/// max |U(t,s) U(s,r) - U(t,r)| over deterministic low-discrepancy triples
/// t >= s >= r in [lo, hi].
CocycleReport cocycle_residual(const EvolutionFamily& fam, std::size_t triples, double lo, double hi);

/// Spectral-norm of a matrix.
double operator_norm(const Mat& m);

}  // namespace aafix

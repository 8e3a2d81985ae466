#pragma once

// Hypothesis checks for the existence and uniqueness theorems, producing
// contraction certificates the solver consumes.

#include "aafix/problem.hpp"
#include "aafix/quadrature.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aafix {

enum class TheoremId {
    ball_zero,                      // 2(L_f+N1+N2) < rho/(rho+|y0|), or 2(L_f+N1) for delayed_only
    shifted_ball,                   // theta = |Gamma y0 - y0| / (1 - L) <= rho
    radius_search,                  // sup_r (r - 2r L_f(r) - 2r N1 - 2r N2) > sup|f(.,0,0)| + alpha1 + alpha2
    half_line_ball,                 // 2(L_f+Q1) < rho/(rho+|y0|)
    half_line_shifted_ball,
    half_line_radius_search,        // sup_r (r - 2r L_f(r) - 2r Q1) > sup|f(.,0,0)| + gamma1 + gamma2
    evolution_ball,                 // M L_g + (M/delta)(1+C_B) L_F <= rho/(rho+|y0|)
    evolution_shifted_ball,         // xi0 = M L_g + (M/delta) L_F (1+C_B)
    evolution_radius_search,        // sup_r (delta r/M - delta r L_g(r) - r L_F(r)(1+C_B)) > C + delta(|y0|+|g(0)|)
    evolution_constant_lipschitz,   // delta/M > delta L_g + (1+C_B) L_F
    resolvent_ball,                 // delta L_g + L_f < rho delta / (M (rho+|y0|))
    resolvent_shifted_ball,
    delay_ball,                     // (M/delta)|f(.,0)| <= rho and M L_f < rho delta/(rho+|x0|)
    delay_shifted_ball,
};

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& name);

enum class Verdict { pass, empirical_pass, degenerate_pass, fail };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& name);

/// One inequality lhs < rhs (strict) or lhs <= rhs, with slack = rhs - lhs.
/// Strict inequalities hold when slack exceeds the certificate's margin.
struct InequalityCheck {
    std::string name;
    std::string expression;
    double lhs = 0.0;
    double rhs = 0.0;
    bool strict = true;
    double slack = 0.0;
    bool holds = false;
};

struct ContractionCertificate {
    TheoremId theorem = TheoremId::ball_zero;
    Variant variant = Variant::advanced_delayed;
    std::string problem;
    EnvelopeConstants constants;
    std::map<std::string, double> inputs;     // L_f, M, delta, L_g, C_B, ...
    SampledPath base_point;
    double base_norm = 0.0;
    double rho = 0.0;
    std::optional<double> theta;
    double contraction = 0.0;
    std::optional<double> xi0;
    std::optional<double> witness_radius;
    std::optional<double> step_norm;          // |Gamma y0 - y0|
    Verdict verdict = Verdict::fail;
    std::string violated;
    std::vector<InequalityCheck> audit;
    std::vector<std::string> notes;
    double slack_margin = 1e-9;

    [[nodiscard]] bool passed() const noexcept { return verdict != Verdict::fail; }
    [[nodiscard]] std::string id() const { return to_string(theorem); }
};

// Arithmetic layer: decides a theorem from already computed scalars.

struct BallData {
    TheoremId theorem = TheoremId::ball_zero;
    double contraction = 0.0;
    double base_norm = 0.0;
    double rho = 0.0;
    double slack = 1e-9;
};
/// |y0| <= rho and contraction < rho/(rho+|y0|).
ContractionCertificate decide_ball(const BallData& d);

/// L = 2(L_f + N1 + N2), with N2 dropped for delayed_only.
ContractionCertificate decide_ball_zero(double L_f, double N1, double N2, double base_norm, double rho,
                                        bool delayed_only = false, double slack = 1e-9);

struct ShiftedBallData {
    TheoremId theorem = TheoremId::shifted_ball;
    double contraction = 0.0;
    double step_norm = 0.0;
    double rho = 0.0;
    double slack = 1e-9;
};
/// theta = step_norm / (1 - contraction); throws CertificationError when
/// contraction >= 1.
ContractionCertificate decide_shifted_ball(const ShiftedBallData& d);

struct RadiusSearchData {
    TheoremId theorem = TheoremId::radius_search;
    std::function<double(double)> objective;      // the sup_r expression
    std::function<double(double)> contraction_at; // contraction constant on the ball of radius r
    double rhs = 0.0;
    double lo = 1e-3;
    double hi = 1e6;
    int points = 1000;
    double slack = 1e-9;
};
struct RadiusScan {
    double R = 0.0;
    double value = 0.0;
};
/// Log-grid scan then golden-section refinement of the objective.
RadiusScan scan_radius(const std::function<double(double)>& objective, double lo, double hi, int points);
ContractionCertificate decide_radius_search(const RadiusSearchData& d);

struct EvolutionData {
    double M = 1.0;
    double delta = 1.0;
    double C_B = 0.0;
    double L_g = 0.0;
    double L_F = 0.0;
    double base_norm = 0.0;
    double rho = 0.0;
    double step_norm = 0.0;   // shifted forms only
    double slack = 1e-9;
};
ContractionCertificate decide_evolution_ball(const EvolutionData& d);
ContractionCertificate decide_evolution_shifted_ball(const EvolutionData& d);
ContractionCertificate decide_evolution_constant_lipschitz(const EvolutionData& d);
/// L_F is read as the Lipschitz constant of f; C_B is ignored.
ContractionCertificate decide_resolvent_ball(const EvolutionData& d);
ContractionCertificate decide_resolvent_shifted_ball(const EvolutionData& d);

struct DelayData {
    double M = 1.0;
    double delta = 1.0;
    double L_f = 0.0;
    double forcing_sup = 0.0;  // sup |f(., 0)|
    double base_norm = 0.0;
    double rho = 0.0;
    double step_norm = 0.0;
    double slack = 1e-9;
};
ContractionCertificate decide_delay_ball(const DelayData& d);
ContractionCertificate decide_delay_shifted_ball(const DelayData& d);

// Problem layer.

/// Envelope constants relevant to the problem variant; the others are left
/// uncomputed.
EnvelopeConstants compute_constants(const ProblemSpec& spec);

struct LipschitzEstimate {
    double value = 0.0;
    bool empirical = false;
    std::string source;
};
/// Analytic constant, curve value on the ball of radius r, or a sampled
/// difference-quotient estimate.
LipschitzEstimate lipschitz_on_ball(const Nonlinearity& f, double radius, const SamplePlan& plan);
/// max over sampled times and state pairs in the ball of
/// |f(t,x,y) - f(t,x',y')| / (|x-x'| + |y-y'|).
double estimate_lipschitz(const Nonlinearity& f, double radius, const SamplePlan& plan);

/// sup over the problem's t-grid of |f(t,0,0)|, never below the declared
/// forcing bound.
double forcing_sup(const ProblemSpec& spec);

struct CertifyOptions {
    std::optional<TheoremId> theorem;   // default: chosen from the variant
    double rho = 0.0;                   // <= 0: chosen automatically
};

TheoremId default_theorem(const ProblemSpec& spec);
/// The theorem families a variant may be certified with.
std::vector<TheoremId> theorems_for(Variant v);

ContractionCertificate certify(const ProblemSpec& spec, const CertifyOptions& opt = {});
ContractionCertificate certify_ball_zero(const ProblemSpec& spec, double rho);
ContractionCertificate certify_shifted_ball(const ProblemSpec& spec, double rho);
ContractionCertificate certify_radius_search(const ProblemSpec& spec);
/// Evolution, resolvent and delay variants; form picks the theorem.
ContractionCertificate certify_evolution(const ProblemSpec& spec, double rho, std::optional<TheoremId> form = {});

struct BNHypothesisReport {
    double rho = 0.0;           // L_f + sup_t (int mu1 + int mu2)
    double L_f = 0.0;
    EnvelopeValue mu_sup;
    bool two_kernel = true;     // false: the mu2 term is dropped
    bool warps_aa = true;
    bool pass = false;
    std::string note;
};
BNHypothesisReport decide_bohr_neugebauer(double L_f, double mu_sum, bool warps_aa, bool two_kernel);
BNHypothesisReport certify_bohr_neugebauer_hypotheses(const ProblemSpec& spec);

}  // namespace aafix

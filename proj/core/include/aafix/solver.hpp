#pragma once

// Picard iteration under a contraction certificate, and the integral
// inequality check used by the Bohr-Neugebauer argument.

#include "aafix/certifier.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aafix {

struct SolverOptions {
    double tol = 1e-8;                    // target distance to the fixed point
    int max_iterations = 500;
    bool keep_iterates = false;
    bool allow_uncertified = false;
    std::optional<SampledPath> start;     // default: the certificate's base point
    int abort_after = 3;                  // consecutive rates above 1
};

struct SolverReport {
    SampledPath solution;
    int iterations = 0;
    std::vector<double> increment_norms;  // |y_{n+1} - y_n|
    std::vector<double> measured_rates;   // ratios of consecutive increments
    double apriori_bound_at_stop = 0.0;   // L^n/(1-L) |y_1 - y_0|
    double residual = 0.0;                // |y - Gamma y|
    std::string certificate_id;
    double contraction = 0.0;
    bool certified = true;
    bool converged = false;
    double stop_threshold = 0.0;
    double max_ball_excursion = 0.0;      // max_n |y_n - y0|
    std::vector<SampledPath> iterates;    // y_0, y_1, ... when kept
    std::vector<std::string> notes;
};

/// Iterates y_{n+1} = Gamma y_n until |y_{n+1} - y_n| <= tol (1-L)/L.
/// Throws CertificationError for a failed certificate unless
/// allow_uncertified, and NonContractionError after abort_after
/// consecutive increment ratios above 1.
SolverReport picard_solve(const ProblemSpec& spec, const ContractionCertificate& cert, const SolverOptions& opt = {});

struct IntegralInequalityReport {
    EnvelopeValue rho;                    // sup_t (int K1 + int K2)
    double a_sup = 0.0;
    double v_sup = 0.0;
    double bound = 0.0;                   // |a| / (1 - rho)
    bool hypothesis_holds = false;
    double max_hypothesis_violation = 0.0;  // max_t v(t) - rhs(t)
    double witness_t = 0.0;
    bool conclusion_holds = false;
    double conclusion_slack = 0.0;        // bound - |v|
    std::size_t points = 0;
};

/// Checks v(t) <= a(t) + int_{-inf}^t K1(t,s) v(s) ds + int_t^inf K2(t,s) v(s) ds
/// on the grid, where K_i(t,s) = D_i(t,s) lambda_i(s), and the bound
/// |v| <= |a| / (1 - rho). Throws CertificationError when rho >= 1.
IntegralInequalityReport check_integral_inequality(const std::function<double(double)>& a, const TwoTimeEnvelope& k1,
                                                   const TwoTimeEnvelope& k2, const SampledPath& v,
                                                   const std::vector<double>& grid, double tol = 1e-10);

}  // namespace aafix

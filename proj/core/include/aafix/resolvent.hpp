#pragma once

// Resolvent operators R(t) of u' = A u + int_0^t B(t-s) u(s) ds.

#include "aafix/function_space.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aafix {

struct ResolventOptions {
    double t_max = 10.0;
    double step = 0.01;
    bool richardson = true;        // combine steps h and h/2
    double tol = 1e-6;             // residual threshold
    int test_vectors = 12;
    int residual_nodes = 40;
};

/// |R(t)| <= M e^{-gamma t / q}.
struct ResolventDecay {
    double M = 1.0;
    double gamma = 0.0;
    double q = 1.0;
    [[nodiscard]] double bound(double t) const;
};

class ResolventOperator {
public:
    ResolventOperator() = default;
    ResolventOperator(Mat A, std::function<Mat(double)> B, SampledPath table);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(A_.rows()); }
    [[nodiscard]] const Mat& A() const noexcept { return A_; }
    [[nodiscard]] Mat B(double t) const { return B_(t); }
    [[nodiscard]] const std::function<Mat(double)>& memory() const noexcept { return B_; }
    [[nodiscard]] double t_max() const { return table_.t_max(); }
    /// R(t) for 0 <= t <= t_max; R(0) is the identity exactly.
    [[nodiscard]] Mat at(double t) const;
    /// Stored table, one column per node holding R column-major.
    [[nodiscard]] const SampledPath& table() const noexcept { return table_; }

    double residual = 0.0;             // max residual over test vectors and nodes
    std::size_t residual_vectors = 0;
    std::optional<ResolventDecay> decay;

private:
    Mat A_;
    std::function<Mat(double)> B_;
    SampledPath table_;
};

/// Trapezoidal time stepping with trapezoidal memory convolution, optionally
/// Richardson-extrapolated; checks the defining equation on test vectors and
/// throws PropagationError when the residual exceeds opt.tol.
ResolventOperator build_resolvent(const Mat& A, std::function<Mat(double)> B, const ResolventOptions& opt = {});

/// max over test vectors and nodes of |R'(t)y - A R(t)y - int_0^t B(t-s) R(s) y ds| / |y|.
double resolvent_residual(const ResolventOperator& R, int vectors, int nodes);

struct DecayRow {
    double t = 0.0;
    double norm = 0.0;
    double bound = 0.0;
};

struct DecayTable {
    std::vector<DecayRow> rows;
    bool holds = false;
    double worst_slack = 0.0;
};

DecayTable decay_table(const ResolventOperator& R, const ResolventDecay& d, const std::vector<double>& times);

}  // namespace aafix

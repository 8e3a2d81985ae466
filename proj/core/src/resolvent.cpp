#include "aafix/resolvent.hpp"

#include "aafix/evolution.hpp"
#include "aafix/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace aafix {

namespace {

std::vector<Mat> march(const Mat& A, const std::function<Mat(double)>& B, double h, std::size_t N) {
    const auto d = A.rows();
    const Mat I = Mat::Identity(d, d);
    std::vector<Mat> Bk(N + 1);
    for (std::size_t k = 0; k <= N; ++k) Bk[k] = B(static_cast<double>(k) * h);
    const Eigen::PartialPivLU<Mat> lhs(I - 0.5 * h * A - 0.25 * h * h * Bk[0]);

    std::vector<Mat> R(N + 1);
    R[0] = I;
    Mat memory = Mat::Zero(d, d);  // I_n
    for (std::size_t n = 0; n < N; ++n) {
        Mat known = 0.5 * Bk[n + 1];
        for (std::size_t j = 1; j <= n; ++j) known.noalias() += Bk[n + 1 - j] * R[j];
        known *= h;
        const Mat rhs = R[n] + 0.5 * h * (A * R[n] + memory) + 0.5 * h * known;
        R[n + 1] = lhs.solve(rhs);
        if (!R[n + 1].allFinite()) throw PropagationError("build_resolvent: non-finite step");
        memory = known + 0.5 * h * Bk[0] * R[n + 1];
    }
    return R;
}

}  // namespace

double ResolventDecay::bound(double t) const { return M * std::exp(-gamma * t / q); }

ResolventOperator::ResolventOperator(Mat A, std::function<Mat(double)> B, SampledPath table)
    : A_(std::move(A)), B_(std::move(B)), table_(std::move(table)) {}

Mat ResolventOperator::at(double t) const {
    const auto d = A_.rows();
    if (t == 0.0) return Mat::Identity(d, d);
    if (t < 0.0) throw DomainError("resolvent: negative time");
    const Vec flat = table_.evaluate(t);
    return Eigen::Map<const Mat>(flat.data(), d, d);
}

ResolventOperator build_resolvent(const Mat& A, std::function<Mat(double)> B, const ResolventOptions& opt) {
    if (A.rows() != A.cols() || A.rows() == 0) throw Error("build_resolvent: A must be square");
    if (!(opt.step > 0.0) || !(opt.t_max > 0.0)) throw Error("build_resolvent: need positive step and horizon");
    if (!B) B = [d = A.rows()](double) { return Mat::Zero(d, d); };
    const auto N = static_cast<std::size_t>(std::ceil(opt.t_max / opt.step - 1e-9));
    const double h = opt.t_max / static_cast<double>(N);
    std::vector<Mat> coarse = march(A, B, h, N);
    if (opt.richardson) {
        const std::vector<Mat> fine = march(A, B, 0.5 * h, 2 * N);
        for (std::size_t n = 1; n <= N; ++n) coarse[n] = (4.0 * fine[2 * n] - coarse[n]) / 3.0;
    }
    const auto d = A.rows();
    std::vector<double> grid(N + 1);
    Mat values(d * d, static_cast<Eigen::Index>(N + 1));
    for (std::size_t n = 0; n <= N; ++n) {
        grid[n] = static_cast<double>(n) * h;
        values.col(static_cast<Eigen::Index>(n)) = Eigen::Map<const Vec>(coarse[n].data(), d * d);
    }
    grid.back() = opt.t_max;
    ResolventOperator R(A, B, SampledPath(DomainKind::half_line, std::move(grid), std::move(values)));
    R.residual = resolvent_residual(R, opt.test_vectors, opt.residual_nodes);
    R.residual_vectors = static_cast<std::size_t>(opt.test_vectors);
    if (R.residual > opt.tol) {
        std::ostringstream msg;
        msg << "build_resolvent: defining-equation residual " << R.residual << " exceeds " << opt.tol;
        throw PropagationError(msg.str());
    }
    return R;
}

double resolvent_residual(const ResolventOperator& R, int vectors, int nodes) {
    const auto d = R.A().rows();
    const auto grid = R.table().grid();
    const std::size_t n = grid.size();
    if (n < 6) throw Error("resolvent_residual: table too short");
    const double H = grid[1] - grid[0];

    std::vector<Vec> ys;
    for (int v = 1; v <= vectors; ++v) {
        Vec y(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            // deterministic pseudo-random direction
            const double u = std::sin(12.9898 * v + 78.233 * static_cast<double>(k + 1)) * 43758.5453;
            y(k) = 2.0 * (u - std::floor(u)) - 1.0;
        }
        if (y.norm() == 0.0) y(0) = 1.0;
        ys.push_back(y / y.norm());
    }

    auto node = [&](std::size_t i) {
        const Vec flat = R.table().value(i);
        return Mat(Eigen::Map<const Mat>(flat.data(), d, d));
    };
    QuadOptions qo;
    qo.tol = 1e-11;
    double worst = 0.0;
    const std::size_t first = 2, last = n - 3;
    const int count = std::max(1, nodes);
    for (int m = 0; m < count; ++m) {
        const std::size_t i = first + static_cast<std::size_t>(
                                          std::llround(static_cast<double>(last - first) * m / std::max(1, count - 1)));
        const double t = grid[i];
        const Mat deriv = (-node(i + 2) + 8.0 * node(i + 1) - 8.0 * node(i - 1) + node(i - 2)) / (12.0 * H);
        const auto conv = integrate_interval(
            [&](double s) {
                const Mat prod = R.B(t - s) * R.at(s);
                return Vec(Eigen::Map<const Vec>(prod.data(), d * d));
            },
            0.0, t, qo);
        const Mat E = deriv - R.A() * node(i) - Eigen::Map<const Mat>(conv.value.data(), d, d);
        for (const auto& y : ys) worst = std::max(worst, (E * y).norm());
    }
    return worst;
}

DecayTable decay_table(const ResolventOperator& R, const ResolventDecay& d, const std::vector<double>& times) {
    DecayTable tab;
    tab.holds = true;
    tab.worst_slack = std::numeric_limits<double>::infinity();
    for (double t : times) {
        DecayRow row{t, operator_norm(R.at(t)), d.bound(t)};
        const double slack = row.bound - row.norm;
        tab.worst_slack = std::min(tab.worst_slack, slack);
        if (slack < -1e-12 * d.M) tab.holds = false;
        tab.rows.push_back(row);
    }
    return tab;
}

}  // namespace aafix

#include "aafix/solver.hpp"

#include "aafix/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aafix {

SolverReport picard_solve(const ProblemSpec& spec, const ContractionCertificate& cert, const SolverOptions& opt) {
    if (!(opt.tol > 0.0)) throw Error("picard_solve: tol must be positive");
    SolverReport rep;
    rep.certificate_id = cert.id();
    rep.contraction = cert.contraction;
    rep.certified = cert.passed();
    if (!rep.certified) {
        if (!opt.allow_uncertified)
            throw CertificationError("certificate " + cert.id() + " failed (" + cert.violated +
                                     "); rerun with the uncertified override to iterate anyway");
        rep.notes.push_back("uncertified run: the stopping rule carries no guarantee");
    }
    const SampledPath y0 = cert.base_point.empty() ? compute_base_point(spec) : as_iterate(cert.base_point);
    SampledPath y = opt.start ? as_iterate(*opt.start) : y0;

    const double L = cert.contraction;
    const bool contracting = L < 1.0;
    if (contracting && L > 0.0) rep.stop_threshold = opt.tol * (1.0 - L) / L;
    else rep.stop_threshold = opt.tol;
    if (!contracting) rep.notes.push_back("contraction constant >= 1: stopping on increment size alone");

    if (opt.keep_iterates) rep.iterates.push_back(y);
    rep.max_ball_excursion = y.grid_vector() == y0.grid_vector() ? sup_distance(y, y0) : 0.0;
    int above_one = 0;
    for (int n = 0; n < opt.max_iterations; ++n) {
        SampledPath next = apply_operator(spec, y);
        const double inc = sup_distance(next, y);
        if (!std::isfinite(inc)) throw NonContractionError("Picard increment became non-finite at iteration " + std::to_string(n + 1));
        rep.increment_norms.push_back(inc);
        if (rep.increment_norms.size() >= 2) {
            const double prev = rep.increment_norms[rep.increment_norms.size() - 2];
            const double rate = prev > 0.0 ? inc / prev : 0.0;
            rep.measured_rates.push_back(rate);
            above_one = rate > 1.0 ? above_one + 1 : 0;
            if (above_one >= opt.abort_after) {
                std::ostringstream msg;
                msg << "non-contraction detected: increment ratios above 1 for " << above_one
                    << " consecutive steps (last ratio " << rate << ", increment " << inc << ", certified L "
                    << L << ")";
                throw NonContractionError(msg.str());
            }
        }
        y = std::move(next);
        rep.iterations = n + 1;
        if (y.grid_vector() == y0.grid_vector()) rep.max_ball_excursion = std::max(rep.max_ball_excursion, sup_distance(y, y0));
        if (opt.keep_iterates) rep.iterates.push_back(y);
        if (inc <= rep.stop_threshold || (contracting && L == 0.0)) {
            rep.converged = true;
            break;
        }
    }
    if (contracting && !rep.increment_norms.empty())
        rep.apriori_bound_at_stop =
            std::pow(L, rep.iterations) / (1.0 - L) * rep.increment_norms.front();
    if (!rep.converged) rep.notes.push_back("iteration limit reached before the stopping rule");
    rep.residual = residual(spec, y);
    rep.solution = std::move(y);
    return rep;
}

IntegralInequalityReport check_integral_inequality(const std::function<double(double)>& a, const TwoTimeEnvelope& k1,
                                                   const TwoTimeEnvelope& k2, const SampledPath& v,
                                                   const std::vector<double>& grid, double tol) {
    if (v.dim() != 1) throw Error("check_integral_inequality: v must be scalar");
    if (grid.empty()) throw Error("check_integral_inequality: empty grid");
    IntegralInequalityReport r;
    r.points = grid.size();
    QuadOptions qo;
    qo.tol = tol;
    r.rho = grid_sup(
        [&](double t) {
            double s = 0.0;
            if (k1) s += oriented_integral(k1, Orientation::delayed, t, qo);
            if (k2) s += oriented_integral(k2, Orientation::advanced, t, qo);
            return s;
        },
        grid, tol);
    if (!(r.rho.value < 1.0))
        throw CertificationError("integral inequality: rho = " + std::to_string(r.rho.value) + " is not below 1");

    const SampledPath vv = as_iterate(v);
    r.v_sup = sup_norm(vv);
    for (double t : grid) r.a_sup = std::max(r.a_sup, std::abs(a(t)));
    r.bound = r.a_sup / (1.0 - r.rho.value);

    auto scaled = [&](const TailBound& tb) {
        if (tb.kind == TailBound::Kind::probe) return tb;
        TailBound out = tb;
        out.c = std::max(tb.c * r.v_sup, 1e-300);
        return out;
    };
    r.max_hypothesis_violation = -std::numeric_limits<double>::infinity();
    for (double t : grid) {
        double rhs = a(t);
        if (k1) rhs += integrate_delayed([&](double s) { return k1(t, s) * vv.evaluate(s)(0); }, t, scaled(k1.tail), qo);
        if (k2) rhs += integrate_advanced([&](double s) { return k2(t, s) * vv.evaluate(s)(0); }, t, scaled(k2.tail), qo);
        const double viol = vv.evaluate(t)(0) - rhs;
        if (viol > r.max_hypothesis_violation) {
            r.max_hypothesis_violation = viol;
            r.witness_t = t;
        }
    }
    r.hypothesis_holds = r.max_hypothesis_violation <= 10.0 * tol * std::max(1.0, r.v_sup);
    r.conclusion_slack = r.bound - r.v_sup;
    r.conclusion_holds = r.conclusion_slack >= -10.0 * tol * std::max(1.0, r.v_sup);
    return r;
}

}  // namespace aafix

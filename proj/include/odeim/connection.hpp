#pragma once

/// Subdominant solutions of Psi' + (ell/x + e + p(x,E) e0) Psi = 0 matched to
/// their large-x asymptotics, and the rotated solutions Psi_k.
///
/// The raw connection is integrated inward from x_match (the subdominant
/// direction grows inward, so contamination decays); the initial vector comes
/// from the formal series of series.hpp evaluated at x_match, with x_match
/// pushed out until the series tail is below a fraction of the solver
/// tolerance.

#include <algorithm>
#include <vector>

#include "odeim/cartan.hpp"
#include "odeim/ode.hpp"
#include "odeim/series.hpp"

namespace odeim {

struct ConnectionParams {
    CartanData cartan;
    double M = 1.0;
    Complex E = 0.0;
    Vector ell;       // coefficients of ell = sum ell_i h_i
    double tol = 1e-10;
    double x_match = 0.0;  // 0 = automatic
    double action_target = 25.0;  // |lambda| Re S(x_match) >= this

    Phases phases() const { return odeim::phases(cartan, M); }
};

struct SolutionTrace {
    std::string rep_label;
    double ray_angle = 0.0;
    Complex k = 0.0;  // rotation index, 0 for Psi itself
    std::vector<std::pair<Complex, Vector>> samples;  // ordered by decreasing |x|
    double x_match = 0.0;
    double tol = 0.0;

    const Vector& at(size_t i) const { return samples[i].second; }
};

inline Matrix connection_matrix(const MatrixRep& rep, const ConnectionParams& p, Complex x,
                                Complex E) {
    Matrix A = Matrix::Zero(rep.dim, rep.dim);
    if (p.ell.size() && p.ell.cwiseAbs().maxCoeff() > 0) {
        for (int i = 0; i < rep.n(); ++i) A += (p.ell[i] / x) * rep.H[i];
    }
    for (const auto& e : rep.E) A += e;
    const Complex pot = std::pow(x, p.M * p.cartan.hvee) - E;
    A += pot * rep.E0;
    return -A;  // Psi' = -(ell/x + e + p e0) Psi
}

// leading-order initial vector of Theorem-style asymptotics at x0
inline Vector subdominant_initial(const MatrixRep& rep, const ConnectionParams& p, Complex x0) {
    SpectrumReport sr = maximal_eigenpair(rep);
    if (!sr.maximal) throw DomainError("subdominant_initial: no maximal eigenvalue");
    const QExpansion q = q_expansion(p.M, p.cartan.hvee, p.E);
    const Complex qv = q_value(q, x0);
    return std::exp(-sr.maximal->lambda * action(q, x0)) *
           (exp_h(rep, -std::log(qv)) * sr.maximal->psi);
}

// generic plumbing: integrate the connection along [x_from, x_to]
inline SolutionTrace integrate(const MatrixRep& rep, const ConnectionParams& p, Complex x_from,
                               Complex x_to, const Vector& init,
                               const std::vector<Complex>& sample_xs = {}) {
    SolutionTrace tr;
    tr.rep_label = rep.label;
    tr.tol = p.tol;
    tr.ray_angle = std::arg(x_to);
    OdeOptions opt;
    opt.tol = p.tol;
    auto A = [&](Complex z) { return connection_matrix(rep, p, z, p.E); };
    std::vector<Complex> stops = sample_xs;
    Vector yend = integrate_linear(
        A, x_from, x_to, init, stops,
        [&](Complex z, const Vector& v) { tr.samples.emplace_back(z, v); }, opt);
    if (tr.samples.empty() || std::abs(tr.samples.back().first - x_to) > 1e-12 * std::abs(x_to))
        tr.samples.emplace_back(x_to, yend);
    return tr;
}

namespace detail {

struct MatchPlan {
    AsymptoticExpansion series;
    double x_match;
    QExpansion q;
};

// eigenpair is (lambda, psi, left, pinv); E already rotated if applicable
inline MatchPlan make_match_plan(const MatrixRep& rep, const ConnectionParams& p, Complex E,
                                 Complex lambda, const Vector& psi, const Vector& left,
                                 const Matrix& pinv, double min_x) {
    const QExpansion q = q_expansion(p.M, p.cartan.hvee, E);
    // per-unit-exponent growth scale of the series coefficients: the potential
    // feeds E through x^{-M hvee} steps, the gauge remainder through
    // x^{-(1+delta)} steps
    const double aE = std::max(std::abs(E), 1.0);
    const double r_conv = std::max({1.2, std::pow(aE, 1.0 / (p.M * p.cartan.hvee)),
                                    std::pow(aE, 1.0 / (1.0 + q.delta))});
    double xm = p.x_match;
    if (xm <= 0) {
        xm = 1.0;
        while ((lambda * action(q, xm)).real() < p.action_target && xm < 1e6) xm *= 1.05;
        // stay modestly above the convergence scale; extra digits come from
        // series depth, which is much cheaper than action growth
        xm = std::max({xm, 1.7 * r_conv, 1.25 * min_x});
    }
    const double digits = std::log(1.0 / (0.01 * p.tol));
    for (int attempt = 0;; ++attempt) {
        // five extra orders absorb the O(1) prefactors of the coefficients
        const double emax =
            std::max(6.0, digits / std::log(std::max(xm / r_conv, 1.5)) + 5.0);
        AsymptoticExpansion ax = asymptotic_expansion(rep, q, p.ell, lambda, psi, left, pinv, emax);
        if (ax.tail_estimate(xm) <= 0.01 * p.tol || p.x_match > 0)
            return {std::move(ax), xm, q};
        if (attempt >= 12) throw AccuracyError("subdominant matching: series tail not converging");
        if ((lambda * action(q, xm)).real() > 650.0)
            throw AccuracyError("subdominant matching: action too large for double precision");
        xm *= 1.2;
    }
}

}  // namespace detail

// Subdominant solution sampled at the given positive radii (any order; the
// trace is stored outside-in). k rotates: integrates at E' = Omega^k E along
// the ray arg x = k * arg(omega) and applies omega^{-k h}.
inline SolutionTrace psi_k(const MatrixRep& rep, const ConnectionParams& p, Complex k,
                           const std::vector<double>& sample_radii) {
    const Phases ph = p.phases();
    if (std::abs(k) >= p.cartan.hvee * (p.M + 1.0) / 2.0)
        throw DomainError("psi_k: |k| too large for the rotated ray");
    // the closed sector is allowed: at hvee = 2 the half-unit rotations land
    // exactly on the boundary ray, where the subdominant direction is purely
    // oscillatory and inward integration is still well-conditioned
    const double ang = 2.0 * kPi * k.real() / (p.cartan.hvee * (p.M + 1.0));
    if (std::abs(ang) > kPi / (2.0 * (p.M + 1.0)) + 1e-12)
        throw DomainError("psi_k: rotated ray leaves the validity sector");

    SpectrumReport sr = maximal_eigenpair(rep);
    if (!sr.maximal) throw DomainError("psi_k: representation has no maximal eigenvalue");
    const auto& mx = *sr.maximal;

    const Complex E_rot = ph.Omega_pow(k) * p.E;
    const Complex rot = ph.omega_pow(k);

    std::vector<double> radii = sample_radii;
    std::sort(radii.begin(), radii.end(), std::greater<double>());
    const double rmax = radii.empty() ? 1.0 : radii.front();

    auto plan = detail::make_match_plan(rep, p, E_rot, mx.lambda, mx.psi, mx.left, mx.pinv, rmax);
    const Complex x0 = plan.x_match * rot;

    Vector init = std::exp(-mx.lambda * action(plan.q, x0)) *
                  (exp_h(rep, -std::log(q_value(plan.q, x0))) * plan.series.eval(x0));
    // When the action has a log term, rotation shifts it by a constant:
    // S(om^k x, Om^k E) = gamma^k S(x,E) + c_s(Om^k E) log(om^k). Compensate
    // so Psi_k keeps the clean normalization e^{-lambda gamma^k S} q^{-h}
    // gamma^{-k h}(psi + o(1)) for this action convention in every case.
    if (plan.q.log_case && plan.q.s >= 1)
        init *= std::exp(mx.lambda * plan.q.c[plan.q.s - 1] * std::log(rot));

    SolutionTrace tr;
    tr.rep_label = rep.label;
    tr.ray_angle = ang;
    tr.k = k;
    tr.x_match = plan.x_match;
    tr.tol = p.tol;

    OdeOptions opt;
    opt.tol = p.tol;
    auto A = [&](Complex z) { return connection_matrix(rep, p, z, E_rot); };
    Matrix twist = gamma_h_twist(rep, ph.omega, -k);
    std::vector<Complex> stops;
    for (double r : radii) stops.push_back(r * rot);
    if (stops.empty()) stops.push_back(rot);
    integrate_linear(A, x0, stops.back(), init, stops,
                     [&](Complex z, const Vector& v) { tr.samples.emplace_back(z / rot, twist * v); },
                     opt);
    return tr;
}

inline SolutionTrace subdominant_solution(const MatrixRep& rep, const ConnectionParams& p,
                                          const std::vector<double>& sample_radii) {
    return psi_k(rep, p, 0.0, sample_radii);
}

// relative ODE residual at midpoints of consecutive samples, via one-step
// re-integration; a cheap defining-equation check for traces
inline double trace_residual(const MatrixRep& rep, const ConnectionParams& p,
                             const SolutionTrace& tr) {
    double worst = 0;
    const Phases ph = p.phases();
    const Complex rot = ph.omega_pow(tr.k);
    const Complex E_rot = ph.Omega_pow(tr.k) * p.E;
    Matrix untwist = gamma_h_twist(rep, ph.omega, tr.k);
    auto A = [&](Complex z) { return connection_matrix(rep, p, z, E_rot); };
    OdeOptions opt;
    opt.tol = p.tol * 0.01;
    for (size_t i = 0; i + 1 < tr.samples.size(); ++i) {
        Vector from = untwist * tr.samples[i].second;
        Vector expect = untwist * tr.samples[i + 1].second;
        Vector got = integrate_linear(A, tr.samples[i].first * rot, tr.samples[i + 1].first * rot,
                                      from, {}, nullptr, opt);
        worst = std::max(worst, (got - expect).norm() / expect.norm());
    }
    return worst;
}

}  // namespace odeim

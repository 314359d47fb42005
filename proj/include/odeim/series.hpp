#pragma once

/// Formal large-x expansion of the subdominant solution.
///
/// Writing Psi = e^{-lambda S(x,E)} q(x,E)^{-h} Phi(x), the function Phi
/// satisfies
///     Phi' + ( q (Lambda - lambda) + R(x) ) Phi = 0,
///     R(x) = (ell - M h)/x + (M/x - q'/q) h + (p q^{1-hvee} - q) e0,
/// and admits a formal series Phi = c(x) psi + w(x) in real powers x^{-e}.
/// The series is solved by fixed-point iteration: w from the invertible part
/// of (Lambda - lambda), c by termwise integration of the psi-projection.
/// Initializing the integration with this series instead of the bare leading
/// term is what pushes the matching error below the solver tolerance; the
/// leading term alone leaves a power-law error O(x_match^{-1}).
///
/// Terms are keyed by real exponents (fuzzy-merged), so fractional M works
/// without a lattice assumption. A term hitting exponent 1 in c' would need
/// a log; the secular psi-projection of (ell - M h) vanishes structurally
/// and anything else triggers an error.

#include <map>
#include <vector>

#include "odeim/qexpansion.hpp"
#include "odeim/rep.hpp"

namespace odeim {

namespace series_detail {

using ScalarTerms = std::map<double, Complex>;

inline void add_term(ScalarTerms& s, double e, Complex v) {
    auto it = s.lower_bound(e - 1e-9);
    if (it != s.end() && std::abs(it->first - e) < 1e-9) {
        it->second += v;
        return;
    }
    s[e] = v;
}

inline ScalarTerms multiply(const ScalarTerms& a, const ScalarTerms& b, double emax) {
    ScalarTerms out;
    for (const auto& [e1, c1] : a)
        for (const auto& [e2, c2] : b)
            if (e1 + e2 <= emax) add_term(out, e1 + e2, c1 * c2);
    return out;
}

}  // namespace series_detail

struct AsymptoticExpansion {
    Complex lambda;
    Vector psi;
    double emax = 0;
    std::map<double, Complex> c;        // scalar series, term x^{-e}
    std::map<double, Vector> w;         // vector series in the complement of psi

    // The series is asymptotic: at fixed x the term magnitudes decrease to a
    // minimum and then diverge. Evaluation truncates at the minimal term and
    // the magnitude there is the honest error floor.
    std::map<double, double> level_magnitudes() const {
        std::map<double, double> m;
        const double pn = std::max(psi.cwiseAbs().maxCoeff(), 1e-300);
        auto add = [&](double e, double mag) {
            auto it = m.lower_bound(e - 1e-9);
            if (it != m.end() && std::abs(it->first - e) < 1e-9) it->second += mag;
            else m[e] = mag;
        };
        for (const auto& [e, co] : c) add(e, std::abs(co) * pn);
        for (const auto& [e, vec] : w) add(e, vec.cwiseAbs().maxCoeff());
        return m;
    }

    double cut_exponent(double ax) const {
        double best_e = emax + 1.0, best_m = std::numeric_limits<double>::infinity();
        for (const auto& [e, mag] : level_magnitudes()) {
            const double v = mag * std::pow(ax, -e);
            if (v < best_m) {
                best_m = v;
                best_e = e;
            }
        }
        return best_e;
    }

    Vector eval(Complex x) const {
        const double cut = cut_exponent(std::abs(x)) + 1e-9;
        Vector v = Vector::Zero(psi.size());
        Complex cs = 0;
        for (const auto& [e, co] : c)
            if (e <= cut) cs += co * std::pow(x, -e);
        v = cs * psi;
        for (const auto& [e, vec] : w)
            if (e <= cut) v += std::pow(x, -e) * vec;
        return v;
    }

    // magnitude of the minimal (first omitted) term at x, relative to |psi|
    double tail_estimate(Complex x) const {
        const double ax = std::abs(x);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [e, mag] : level_magnitudes())
            best = std::min(best, mag * std::pow(ax, -e));
        return best / std::max(psi.cwiseAbs().maxCoeff(), 1e-300);
    }
};

// eigenpair may be any simple eigenvalue of Lambda (rotated solutions use
// gamma^k lambda with psi_k = gamma^{-k h} psi)
inline AsymptoticExpansion asymptotic_expansion(const MatrixRep& rep, const QExpansion& q,
                                                const Vector& ell, Complex lambda,
                                                const Vector& psi, const Vector& left,
                                                const Matrix& pinv, double emax) {
    using series_detail::ScalarTerms;
    using series_detail::add_term;
    using series_detail::multiply;

    const Eigen::Index d = rep.dim;
    const double M = q.M;
    const int hv = q.hvee;

    // scalar series for q, 1/q, q' / q, p q^{1-hvee} - q
    ScalarTerms qs;
    add_term(qs, -M, 1.0);
    for (int j = 1; j <= q.s; ++j) add_term(qs, -q_term_exponent(q, j), q.c[j - 1]);

    ScalarTerms u;  // q = x^M (1 + u)
    for (int j = 1; j <= q.s; ++j) add_term(u, M * hv * j, q.c[j - 1]);
    ScalarTerms inv_one_plus_u{{0.0, 1.0}};
    {
        ScalarTerms term{{0.0, 1.0}};
        for (int pass = 0; pass < 400; ++pass) {
            ScalarTerms nt;
            for (const auto& [e1, c1] : term)
                for (const auto& [e2, c2] : u)
                    if (e1 + e2 <= emax + M * hv) add_term(nt, e1 + e2, -c1 * c2);
            if (nt.empty()) break;
            for (const auto& [e, co] : nt) add_term(inv_one_plus_u, e, co);
            term = std::move(nt);
        }
    }
    ScalarTerms qinv;
    for (const auto& [e, co] : inv_one_plus_u)
        if (e + M <= emax + M) add_term(qinv, e + M, co);

    ScalarTerms q_1mh{{0.0, 1.0}};
    for (int t = 0; t < hv - 1; ++t) q_1mh = multiply(q_1mh, qinv, emax + M * hv + M);
    // p q^{1-hvee} - q, tracking the gross summand size per exponent so that
    // only genuine cancellation dust gets pruned
    ScalarTerms pq;
    std::map<double, double> gross;
    auto add_tracked = [&](double e, Complex co) {
        add_term(pq, e, co);
        auto it = gross.lower_bound(e - 1e-9);
        if (it != gross.end() && std::abs(it->first - e) < 1e-9) it->second += std::abs(co);
        else gross[e] = std::abs(co);
    };
    for (const auto& [e, co] : q_1mh) {
        add_tracked(e - M * hv, co);
        add_tracked(e, -q.E * co);
    }
    for (const auto& [e, co] : qs) add_tracked(e, -co);

    ScalarTerms qprime;
    for (const auto& [e, co] : qs) add_term(qprime, e + 1.0, -e * co);
    ScalarTerms qpq = multiply(qprime, qinv, emax);
    ScalarTerms ah;  // M/x - q'/q
    add_term(ah, 1.0, Complex(M));
    for (const auto& [e, co] : qpq) add_term(ah, e, -co);

    for (auto it = pq.begin(); it != pq.end();) {
        auto g = gross.lower_bound(it->first - 1e-9);
        const double ref = (g != gross.end() && std::abs(g->first - it->first) < 1e-9) ? g->second : 1.0;
        it = std::abs(it->second) < 1e-14 * ref ? pq.erase(it) : std::next(it);
    }
    for (auto it = ah.begin(); it != ah.end();)
        it = std::abs(it->second) < 1e-15 * std::max(1.0, M) ? ah.erase(it) : std::next(it);

    // R(x) = (ell - M h)/x + ah * h + pq * e0
    Matrix ell_m = Matrix::Zero(d, d);
    for (int i = 0; i < rep.n(); ++i) ell_m += ell[i] * rep.H[i];
    const Matrix secular = ell_m - M * rep.h;
    std::map<double, Matrix> R;
    auto addR = [&](double e, const Matrix& m) {
        if (e > emax + 1.0) return;
        auto it = R.lower_bound(e - 1e-9);
        if (it != R.end() && std::abs(it->first - e) < 1e-9) it->second += m;
        else R.emplace(e, m);
    };
    addR(1.0, secular);
    for (const auto& [e, co] : ah) addR(e, co * rep.h);
    for (const auto& [e, co] : pq) addR(e, co * rep.E0);

    const Complex den = (left.transpose() * psi).value();
    {
        Complex sec = (left.transpose() * (secular * psi)).value() / den;
        if (std::abs(sec) > 1e-9 * std::max(1.0, max_abs(secular)))
            throw AccuracyError("asymptotic_expansion: secular 1/x term does not vanish");
    }

    AsymptoticExpansion out;
    out.lambda = lambda;
    out.psi = psi;
    out.emax = emax;
    out.c[0.0] = 1.0;

    const int passes = static_cast<int>(emax / std::min(1.0, M)) + 4;
    for (int pass = 0; pass < passes; ++pass) {
        // v = c psi + w
        std::map<double, Vector> v;
        auto addv = [&](std::map<double, Vector>& dst, double e, const Vector& x) {
            auto it = dst.lower_bound(e - 1e-9);
            if (it != dst.end() && std::abs(it->first - e) < 1e-9) it->second += x;
            else dst.emplace(e, x);
        };
        for (const auto& [e, co] : out.c) addv(v, e, co * psi);
        for (const auto& [e, vec] : out.w) addv(v, e, vec);
        // T = R v + w'
        std::map<double, Vector> T;
        for (const auto& [e1, m] : R)
            for (const auto& [e2, vec] : v)
                if (e1 + e2 <= emax + M + 1.0) addv(T, e1 + e2, m * vec);
        for (const auto& [e, vec] : out.w)
            if (e + 1.0 <= emax + M + 1.0 && e != 0.0) addv(T, e + 1.0, -e * vec);
        // new w = -(1/q) pinv T  (pinv kills the psi-direction)
        std::map<double, Vector> nw;
        for (const auto& [e1, co] : qinv)
            for (const auto& [e2, vec] : T)
                if (e1 + e2 <= emax && e1 + e2 > 1e-12) addv(nw, e1 + e2, -co * (pinv * vec));
        // new c: c' = -(left T)/den, integrated from infinity
        std::map<double, Complex> nc{{0.0, 1.0}};
        for (const auto& [e, vec] : T) {
            Complex cp = -(left.transpose() * vec).value() / den;
            if (std::abs(cp) < 1e-300) continue;
            if (e <= 1.0 + 1e-9) {
                if (std::abs(cp) > 1e-9)
                    throw AccuracyError("asymptotic_expansion: log resonance in the scalar series");
                continue;
            }
            if (e - 1.0 <= emax) {
                auto it = nc.lower_bound(e - 1.0 - 1e-9);
                if (it != nc.end() && std::abs(it->first - (e - 1.0)) < 1e-9) it->second += cp / (1.0 - e);
                else nc[e - 1.0] = cp / (1.0 - e);
            }
        }
        // converged when nothing moved
        double delta = 0;
        for (const auto& [e, vec] : nw) {
            auto it = out.w.lower_bound(e - 1e-9);
            if (it != out.w.end() && std::abs(it->first - e) < 1e-9)
                delta = std::max(delta, (vec - it->second).cwiseAbs().maxCoeff());
            else
                delta = std::max(delta, vec.cwiseAbs().maxCoeff());
        }
        for (const auto& [e, co] : nc) {
            auto it = out.c.lower_bound(e - 1e-9);
            if (it != out.c.end() && std::abs(it->first - e) < 1e-9)
                delta = std::max(delta, std::abs(co - it->second));
            else
                delta = std::max(delta, std::abs(co));
        }
        out.w = std::move(nw);
        out.c = std::move(nc);
        if (delta < 1e-15) break;
    }
    // drop numerically dead levels (cancellation remnants such as the empty
    // secular slot); a genuine tail minimum is never thirteen orders below
    // the levels that follow it, dust is
    {
        auto levels = out.level_magnitudes();
        std::vector<std::pair<double, double>> lv(levels.begin(), levels.end());
        std::vector<double> suffix(lv.size(), 0.0);
        for (int i = static_cast<int>(lv.size()) - 2; i >= 0; --i)
            suffix[i] = std::max(suffix[i + 1], lv[i + 1].second);
        auto dead = [&](double e) {
            for (size_t i = 0; i < lv.size(); ++i)
                if (std::abs(lv[i].first - e) < 1e-9) return lv[i].second * 1e13 < suffix[i];
            return false;
        };
        for (auto it = out.c.begin(); it != out.c.end();)
            it = dead(it->first) ? out.c.erase(it) : std::next(it);
        for (auto it = out.w.begin(); it != out.w.end();)
            it = dead(it->first) ? out.w.erase(it) : std::next(it);
    }
    return out;
}

}  // namespace odeim

#pragma once

/// Functional relations among the spectral determinants: the quadratic
/// relation at Omega-shifted arguments, zero location on a real window with
/// an argument-principle certifier, and the product relation at zeros.
///
/// Phase conventions (fixed by re-deriving the shift identities from the
/// monodromy normalization and validated against the rank-one Wronskian and
/// the A-series closed-form spectra):
///   prod_j Q^(j)(E)^{B_ij} = omega^{+theta_i/2} Q^(i)(O- E) Qt^(i)(O+ E)
///                          - omega^{-theta_i/2} Q^(i)(O+ E) Qt^(i)(O- E),
///   omega^{-theta_i} prod_j Q^(j)(O^{C_ij/2} E*) / Q^(j)(O^{-C_ij/2} E*) = -1
/// with O± = Omega^{±1/2} and theta_i the (ell+h) difference of the two
/// leading weights. Note omega^{-theta_i} = Omega^{-2 sum_j beta_j C_ij}.

#include <functional>
#include <map>
#include <vector>

#include "odeim/frobenius.hpp"

namespace odeim {

struct QTable {
    int node = 0;
    std::vector<std::pair<Complex, QPair>> samples;
    std::vector<Complex> zeros;
    std::vector<double> bethe_residuals;  // per zero
};

// memoizing evaluator; the pipelines are deterministic so caching is safe
class QEvaluator {
  public:
    explicit QEvaluator(const SpectralPipeline& sp) : sp_(sp) {}

    QPair at(int node, Complex E) const {
        auto key = std::make_tuple(node, E.real(), E.imag());
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        QPair qp = extract_QQ(sp_, node, E);
        cache_.emplace(key, qp);
        return qp;
    }
    const SpectralPipeline& pipeline() const { return sp_; }

  private:
    const SpectralPipeline& sp_;
    mutable std::map<std::tuple<int, double, double>, QPair> cache_;
};

// relative residual of the quadratic Q relation at node i
inline Complex qq_residual(const QEvaluator& qe, int i, Complex E) {
    const SpectralPipeline& sp = qe.pipeline();
    const Phases ph = sp.phases();
    const Complex theta = sp.weyl[i - 1].theta;
    Complex lhs = 1.0;
    for (int j = 1; j <= sp.fs.cartan.rank(); ++j)
        if (sp.fs.cartan.B(i - 1, j - 1) == 1) lhs *= qe.at(j, E).Q;
    QPair up = qe.at(i, ph.Omega_pow(0.5) * E);
    QPair dn = qe.at(i, ph.Omega_pow(-0.5) * E);
    Complex rhs = ph.omega_pow(theta / 2.0) * dn.Q * up.Qt - ph.omega_pow(-theta / 2.0) * up.Q * dn.Qt;
    return (lhs - rhs) / std::max(std::abs(lhs), 1e-300);
}

// product relation at a zero E* of Q^(i); returns product + 1
inline Complex bethe_residual(const QEvaluator& qe, int i, Complex Estar) {
    const SpectralPipeline& sp = qe.pipeline();
    const Phases ph = sp.phases();
    const int n = sp.fs.cartan.rank();
    Complex prod = ph.omega_pow(-sp.weyl[i - 1].theta);
    for (int j = 1; j <= n; ++j) {
        const int cij = sp.fs.cartan.C(i - 1, j - 1);
        if (cij == 0) continue;
        Complex num = qe.at(j, ph.Omega_pow(cij / 2.0) * Estar).Q;
        Complex den = qe.at(j, ph.Omega_pow(-cij / 2.0) * Estar).Q;
        // scale reference for the common-zero guard
        double ref = std::abs(qe.at(j, Estar).Q) + std::abs(num) + std::abs(den);
        if (std::abs(den) < 1e-10 * ref || std::abs(num) < 1e-10 * ref)
            throw GenericityError("bethe_residual: Q vanishes at a shifted point (common zero)");
        prod *= num / den;
    }
    return prod + 1.0;
}

struct ZeroSearchOptions {
    int grid_points = 120;
    int max_iterations = 60;
    double certify_rel = 1e-8;
};

// |Q| minima on a real window refined by complex secant iteration
inline std::vector<Complex> find_q_zeros(const QEvaluator& qe, int i, double E_lo, double E_hi,
                                         int max_count, const ZeroSearchOptions& opt = {}) {
    std::vector<Complex> zeros;
    if (E_hi <= E_lo) return zeros;
    const int m = opt.grid_points;
    std::vector<double> Es(m);
    std::vector<double> absq(m);
    for (int t = 0; t < m; ++t) {
        Es[t] = E_lo + (E_hi - E_lo) * t / (m - 1);
        absq[t] = std::abs(qe.at(i, Es[t]).Q);
    }
    for (int t = 1; t + 1 < m && static_cast<int>(zeros.size()) < max_count; ++t) {
        if (!(absq[t] < absq[t - 1] && absq[t] < absq[t + 1])) continue;
        double local = std::max(absq[t - 1], absq[t + 1]);
        Complex x0 = Es[t - 1], x1 = Es[t + 1];
        Complex f0 = qe.at(i, x0).Q, f1 = qe.at(i, x1).Q;
        bool converged = false;
        for (int it = 0; it < opt.max_iterations; ++it) {
            if (std::abs(f1 - f0) < 1e-300) break;
            Complex x2 = x1 - f1 * (x1 - x0) / Complex(f1 - f0);
            Complex f2 = qe.at(i, x2).Q;
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = f2;
            if (std::abs(x1 - x0) < 1e-12 * (1.0 + std::abs(x1))) {
                converged = true;
                break;
            }
        }
        if (converged && std::abs(f1) < opt.certify_rel * std::max(local, 1e-300)) {
            bool dup = false;
            for (Complex z : zeros)
                if (std::abs(z - x1) < 1e-6 * (1.0 + std::abs(z))) dup = true;
            if (!dup) zeros.push_back(x1);
        }
    }
    std::sort(zeros.begin(), zeros.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    return zeros;
}

// winding number of f around a rectangle, refining until phase steps stay small
inline int winding_number(const std::function<Complex(Complex)>& f, Complex lo, Complex hi,
                          int initial_per_side = 32, int max_refine = 12) {
    std::vector<Complex> corners{lo, Complex(hi.real(), lo.imag()), hi, Complex(lo.real(), hi.imag())};
    double total = 0;
    for (int side = 0; side < 4; ++side) {
        Complex a = corners[side], b = corners[(side + 1) % 4];
        int pts = initial_per_side;
        for (int attempt = 0;; ++attempt) {
            bool ok = true;
            double acc = 0;
            Complex fprev = f(a);
            for (int t = 1; t <= pts; ++t) {
                Complex z = a + (b - a) * (double(t) / pts);
                Complex fz = f(z);
                double d = std::arg(fz / fprev);
                if (std::abs(d) > 1.5) {
                    ok = false;
                    break;
                }
                acc += d;
                fprev = fz;
            }
            if (ok) {
                total += acc;
                break;
            }
            if (attempt >= max_refine) throw AccuracyError("winding_number: phase step too large");
            pts *= 2;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

}  // namespace odeim

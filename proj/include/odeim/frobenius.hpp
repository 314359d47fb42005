#pragma once

/// Local analysis at the regular singular point x = 0 and the generalized
/// spectral determinants.
///
/// For generic ell the ell-matrix on V^(i) has a simple eigenvalue of
/// maximal real part and a simple runner-up; their eigenvectors realize the
/// two leading weight vectors without any Weyl-group combinatorics. The
/// Frobenius series on all exponents give a solution basis near 0, and the
/// subdominant solution's coordinates on the two leading series are Q and
/// Qtilde. Requires M hvee to be a positive integer so the coefficient of
/// the connection is analytic at 0.

#include <vector>

#include "odeim/connection.hpp"
#include "odeim/fundsys.hpp"

namespace odeim {

struct WeylData {
    int node = 0;
    Complex lstar, second;   // top two eigenvalues of the ell-matrix on V^(i)
    Vector chi, phi;         // weight vectors, phi scaled by the m_i condition
    Complex theta;           // difference of the (ell+h)-eigenvalues on chi, phi
    Vector beta;             // beta_j = (1/(2 M hvee)) (ell+h)-eigenvalue on chi_j
};

namespace detail {

inline Matrix ell_matrix(const MatrixRep& rep, const Vector& ell) {
    Matrix L = Matrix::Zero(rep.dim, rep.dim);
    for (int i = 0; i < rep.n(); ++i) L += ell[i] * rep.H[i];
    return L;
}

inline void require_integer_mhv(double M, int hvee) {
    const double mhv = M * hvee;
    if (std::abs(mhv - std::round(mhv)) > 1e-12 || mhv < 1)
        throw DomainError("spectral analysis needs M hvee to be a positive integer");
}

}  // namespace detail

struct SpectralPipeline {
    FundamentalSystem fs;
    double M = 1.0;
    Vector ell;
    double tol = 1e-10;
    double genericity_gap = 1e-6;
    int series_order = 40;
    std::vector<WeylData> weyl;

    Phases phases() const { return odeim::phases(fs.cartan, M); }
    ConnectionParams params(Complex E) const {
        ConnectionParams p;
        p.cartan = fs.cartan;
        p.M = M;
        p.E = E;
        p.ell = ell;
        p.tol = tol;
        return p;
    }
};

inline SpectralPipeline build_spectral_pipeline(const CartanData& cd, double M, const Vector& ell,
                                                double tol = 1e-10) {
    detail::require_integer_mhv(M, cd.hvee);
    SpectralPipeline sp;
    sp.fs = build_fundamental_system(cd);
    sp.M = M;
    sp.ell = ell;
    sp.tol = tol;
    const int n = cd.rank();
    sp.weyl.resize(n);

    // spectral realization of the two leading weights per node
    std::vector<Vector> chi_raw(n), phi_raw(n);
    for (int i = 1; i <= n; ++i) {
        const MatrixRep& V = sp.fs(i).V;
        Matrix L = detail::ell_matrix(V, ell);
        Eigensystem es = eigensystem(L);
        std::vector<int> order(es.values.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return es.values[a].real() > es.values[b].real(); });
        const Complex l1 = es.values[order[0]], l2 = es.values[order[1]];
        double gap12 = l1.real() - l2.real();
        double gap23 = order.size() > 2 ? l2.real() - es.values[order[2]].real()
                                        : std::numeric_limits<double>::infinity();
        if (gap12 < sp.genericity_gap || gap23 < sp.genericity_gap)
            throw GenericityError("ell not generic on node " + std::to_string(i) + ": gaps " +
                                  std::to_string(gap12) + ", " + std::to_string(gap23));
        WeylData& wd = sp.weyl[i - 1];
        wd.node = i;
        wd.lstar = l1;
        wd.second = l2;
        chi_raw[i - 1] = phase_normalized(es.right.col(order[0]).normalized());
        phi_raw[i - 1] = phase_normalized(es.right.col(order[1]).normalized());
    }
    // phi normalization through m_i: m_i(chi ^ phi) = (x)_j chi_j
    for (int i = 1; i <= n; ++i) {
        std::vector<Vector> cs;
        for (int j = 1; j <= n; ++j)
            if (cd.B(i - 1, j - 1) == 1) cs.push_back(chi_raw[j - 1]);
        Vector rhs = cs.empty() ? Vector::Ones(1) : tensor_embed(cs);
        Vector lhs = sp.fs(i).m.apply(wedge_embed(chi_raw[i - 1], phi_raw[i - 1]));
        Complex t = parallel_coefficient(lhs, rhs, 1e-8, "chi/phi normalization");
        if (std::abs(t) < 1e-12) throw GenericityError("chi wedge phi degenerate");
        sp.weyl[i - 1].chi = chi_raw[i - 1];
        sp.weyl[i - 1].phi = phi_raw[i - 1] / t;
    }
    // theta and beta from (ell + h) eigenvalues
    auto lh_eigen = [&](const MatrixRep& V, const Vector& v) {
        Matrix LH = detail::ell_matrix(V, ell) + V.h;
        Vector img = LH * v;
        Complex ev = v.dot(img) / v.squaredNorm();
        if ((img - ev * v).norm() > 1e-8 * std::max(1.0, v.norm()))
            throw ConstructionError("weight vector drifted off the (ell+h) eigenbasis");
        return ev;
    };
    Vector beta(n);
    for (int j = 1; j <= n; ++j)
        beta[j - 1] = lh_eigen(sp.fs(j).V, sp.weyl[j - 1].chi) / (2.0 * M * cd.hvee);
    for (int i = 1; i <= n; ++i) {
        const MatrixRep& V = sp.fs(i).V;
        sp.weyl[i - 1].theta =
            lh_eigen(V, sp.weyl[i - 1].chi) - lh_eigen(V, sp.weyl[i - 1].phi);
        sp.weyl[i - 1].beta = beta;
    }
    return sp;
}

struct FrobeniusBasis {
    Vector exponents;                         // mu_a; solution_a ~ x^{-mu_a}(seed_a + O(x))
    std::vector<std::vector<Vector>> coeffs;  // per solution: c_0 .. c_N
    int chi_index = -1, phi_index = -1;
    double radius_hint = 0.5;

    Vector eval(int a, Complex x) const {
        const auto& cs = coeffs[a];
        Vector acc = cs.back();
        for (int m = static_cast<int>(cs.size()) - 2; m >= 0; --m) acc = acc * x + cs[m];
        return std::pow(x, -exponents[a]) * acc;
    }

    // relative size of the last retained order at x
    double tail_estimate(int a, double x) const {
        const auto& cs = coeffs[a];
        const int N = static_cast<int>(cs.size()) - 1;
        double lead = cs[0].cwiseAbs().maxCoeff();
        double t = 0;
        for (int m = N - 3; m <= N; ++m)
            if (m > 0) t = std::max(t, cs[m].cwiseAbs().maxCoeff() * std::pow(x, m));
        return t / std::max(lead, 1e-300);
    }
};

// series seeded with (chi, phi) on the two leading exponents when provided
inline FrobeniusBasis frobenius_basis(const MatrixRep& rep, const SpectralPipeline& sp, int node,
                                      Complex E, int N = -1) {
    detail::require_integer_mhv(sp.M, sp.fs.cartan.hvee);
    if (N < 0) N = sp.series_order;
    const int mhv = static_cast<int>(std::round(sp.M * sp.fs.cartan.hvee));
    Matrix L = detail::ell_matrix(rep, sp.ell);
    Eigensystem es = eigensystem(L);
    const Eigen::Index d = rep.dim;

    // resonance rejection: exponents equal or differing by a nonzero integer
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            if (a == b) continue;
            Complex diff = es.values[a] - es.values[b];
            if (std::abs(diff) < sp.genericity_gap)
                throw GenericityError("frobenius_basis: repeated exponent");
            double nearest = std::round(diff.real());
            if (std::abs(nearest) > 0.5 && std::abs(diff - nearest) < sp.genericity_gap)
                throw GenericityError("frobenius_basis: resonant exponents (integer spacing)");
        }

    const WeylData& wd = sp.weyl[node - 1];
    FrobeniusBasis fb;
    fb.exponents = es.values;
    Matrix e_sum = Matrix::Zero(d, d);
    for (const auto& e : rep.E) e_sum += e;

    for (Eigen::Index a = 0; a < d; ++a) {
        Vector seed = es.right.col(a);
        if (std::abs(es.values[a] - wd.lstar) < 1e-9) {
            seed = wd.chi;
            fb.chi_index = static_cast<int>(a);
        } else if (std::abs(es.values[a] - wd.second) < 1e-9) {
            seed = wd.phi;
            fb.phi_index = static_cast<int>(a);
        }
        std::vector<Vector> cs{seed};
        const Complex mu = es.values[a];
        for (int m = 1; m <= N; ++m) {
            Vector rhs = -(e_sum * cs[m - 1]) + E * (rep.E0 * cs[m - 1]);
            if (m - 1 - mhv >= 0) rhs -= rep.E0 * cs[m - 1 - mhv];
            // ((m - mu) I + L)^{-1} via the eigenbasis of L
            Vector y = es.left * rhs;
            for (Eigen::Index b = 0; b < d; ++b) y[b] /= (Complex(m) - mu + es.values[b]);
            cs.push_back(es.right * y);
        }
        fb.coeffs.push_back(std::move(cs));
    }
    if (fb.chi_index < 0 || fb.phi_index < 0)
        throw ConstructionError("frobenius_basis: leading exponents not matched");
    return fb;
}

struct QPair {
    Complex Q, Qt;
};

// subdominant value at x0, with the c = 1 trace normalization
inline Vector subdominant_value(const SpectralPipeline& sp, int node, Complex E, double x0) {
    SolutionTrace tr = psi_k(sp.fs(node).V, sp.params(E), 0.0, {x0});
    return sp.fs.trace_scale(node) * tr.samples.back().second;
}

inline QPair extract_QQ(const SpectralPipeline& sp, int node, Complex E, double x0 = 0.0) {
    const MatrixRep& V = sp.fs(node).V;
    FrobeniusBasis fb = frobenius_basis(V, sp, node, E);
    double x = x0 > 0 ? x0 : 0.25;
    for (int attempt = 0;; ++attempt) {
        double tail = 0;
        for (Eigen::Index a = 0; a < V.dim; ++a)
            tail = std::max(tail, fb.tail_estimate(static_cast<int>(a), x));
        if (tail < 1e-12 || x0 > 0) break;
        if (attempt > 24) throw AccuracyError("extract_QQ: series radius too small");
        x *= 0.7;
    }
    Matrix A(V.dim, V.dim);
    for (Eigen::Index a = 0; a < V.dim; ++a) A.col(a) = fb.eval(static_cast<int>(a), x);
    RealVector colscale(V.dim);
    for (Eigen::Index a = 0; a < V.dim; ++a) {
        colscale[a] = A.col(a).norm();
        A.col(a) /= colscale[a];
    }
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) / svd.singularValues()(V.dim - 1);
    if (cond > 1e12)
        throw AccuracyError("extract_QQ: basis matrix condition " + std::to_string(cond) +
                            "; reduce x0 or raise the series order");
    Vector coef = svd.solve(subdominant_value(sp, node, E, x));
    return {coef[fb.chi_index] / colscale[fb.chi_index], coef[fb.phi_index] / colscale[fb.phi_index]};
}

// ell = 0 determinants: integrate to the (now regular) origin and read the
// coordinates on the chamber's two leading basis vectors. The chamber is
// selected by a generic direction vector; the default dominant direction
// reproduces the identity Weyl element.
inline QPair q_at_zero_l0(const CartanData& cd, double M, int node, Complex E, double tol = 1e-10,
                          const RealVector& chamber = RealVector()) {
    detail::require_integer_mhv(M, cd.hvee);
    MatrixRep V = fundamental_rep(cd, node);
    ConnectionParams p;
    p.cartan = cd;
    p.M = M;
    p.E = E;
    p.ell = Vector::Zero(cd.rank());
    p.tol = tol;

    RealVector dir = chamber;
    if (dir.size() == 0) {
        dir.resize(cd.rank());
        for (int j = 0; j < cd.rank(); ++j) dir[j] = 1.0 + 0.1 / (j + 2.0);  // generic dominant
    }
    Vector dirc = dir.cast<Complex>();
    Matrix Lw = detail::ell_matrix(V, dirc);
    // basis vectors with the two largest chamber weights
    std::vector<std::pair<double, int>> wts;
    for (Eigen::Index b = 0; b < V.dim; ++b) wts.push_back({Lw(b, b).real(), static_cast<int>(b)});
    std::sort(wts.begin(), wts.end(), [](auto& a, auto& b) { return a.first > b.first; });
    if (wts[0].first - wts[1].first < 1e-9 || (V.dim > 2 && wts[1].first - wts[2].first < 1e-9))
        throw GenericityError("q_at_zero_l0: chamber direction not generic");

    SpectrumReport sr = maximal_eigenpair(V);
    if (!sr.maximal) throw DomainError("q_at_zero_l0: no maximal eigenvalue");
    SolutionTrace tr = psi_k(V, p, 0.0, {});  // no interior samples
    // continue from the last sample to x = 0 (regular point for ell = 0)
    auto A = [&](Complex z) { return connection_matrix(V, p, z, E); };
    OdeOptions opt;
    opt.tol = tol;
    Vector at0 = integrate_linear(A, tr.samples.back().first, Complex(0.0), tr.samples.back().second,
                                  {}, nullptr, opt);
    return {at0[wts[0].second], at0[wts[1].second]};
}

}  // namespace odeim

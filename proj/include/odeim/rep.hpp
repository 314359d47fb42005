#pragma once

/// Explicit matrix representations of the affine Chevalley generators on
/// evaluation representations: standard families, exterior powers, tensor
/// products, the D-series half-spin pair, and spectra of Lambda = e0 + e.
///
/// Conventions. Generators follow the standard realizations (sl_{n+1} by
/// elementary matrices, o_{2n} with the anti-transpose pairing). E0 stores
/// the evaluation factor zeta = e^{2 pi i k} of V_k. The grading element h
/// solves sum_j a_j C_ji = 1, so [h, e_i] = e_i and [h, e0] = -(hvee-1) e0
/// hold by construction. For the A series this h is the negative of the
/// diag(-n/2..n/2) closed form sometimes quoted with the same generator set;
/// that form satisfies [h, e] = -e and is incompatible with the grading
/// relations used here (see tests).
/// `metric` is the diagonal of the contravariant form (e_i adjoint = f_i);
/// distinct irreducible summands are orthogonal under it, which is what the
/// intertwiner construction relies on.

#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "odeim/cartan.hpp"
#include "odeim/linalg.hpp"

namespace odeim {

struct MatrixRep {
    AlgebraKind kind;
    Eigen::Index dim = 0;
    std::vector<Matrix> E, F, H;  // Chevalley triples, one per node
    Matrix E0;                    // e0 action including the evaluation factor
    Matrix h;                     // grading element
    RealVector metric;            // diagonal contravariant form
    Complex twist = 0.0;          // the k of V_k
    std::string label;

    int n() const { return static_cast<int>(E.size()); }
    Complex zeta() const { return std::exp(2.0 * kPi * kI * twist); }
};

inline Matrix lambda_matrix(const MatrixRep& rep) {
    Matrix L = rep.E0;
    for (const auto& e : rep.E) L += e;
    return L;
}

// Chevalley + grading relation residual (max norm); the construction
// self-check and the repcheck CLI both use this.
inline double rep_residual(const MatrixRep& rep, const CartanData& cd) {
    double r = 0;
    const int n = rep.n();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            r = std::max(r, max_abs(commutator(rep.H[i], rep.H[j])));
            r = std::max(r, max_abs(commutator(rep.H[i], rep.E[j]) - double(cd.C(i, j)) * rep.E[j]));
            r = std::max(r, max_abs(commutator(rep.H[i], rep.F[j]) + double(cd.C(i, j)) * rep.F[j]));
            Matrix d = commutator(rep.E[i], rep.F[j]);
            if (i == j) d -= rep.H[i];
            r = std::max(r, max_abs(d));
        }
        r = std::max(r, max_abs(commutator(rep.h, rep.E[i]) - rep.E[i]));
    }
    r = std::max(r, max_abs(commutator(rep.h, rep.E0) + double(cd.hvee - 1) * rep.E0));
    return r;
}

namespace detail {

inline Matrix unit(Eigen::Index d, Eigen::Index i, Eigen::Index j, Complex v = 1.0) {
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = v;
    return m;
}

inline Matrix grading_from_cartans(const CartanData& cd, const std::vector<Matrix>& H) {
    const int n = cd.rank();
    Eigen::MatrixXd C = cd.C.cast<double>();
    RealVector a = C.transpose().fullPivLu().solve(RealVector::Ones(n));
    Matrix g = Matrix::Zero(H[0].rows(), H[0].cols());
    for (int j = 0; j < n; ++j) g += a[j] * H[j];
    return g;
}

}  // namespace detail

// ----- trivial representation: chain-boundary convention Psi^(0) = 1 -----
inline MatrixRep trivial_rep(AlgebraKind kind) {
    MatrixRep r;
    r.kind = kind;
    r.dim = 1;
    r.E.assign(kind.rank, Matrix::Zero(1, 1));
    r.F.assign(kind.rank, Matrix::Zero(1, 1));
    r.H.assign(kind.rank, Matrix::Zero(1, 1));
    r.E0 = Matrix::Zero(1, 1);
    r.h = Matrix::Zero(1, 1);
    r.metric = RealVector::Ones(1);
    r.label = "triv";
    return r;
}

// ----- A_n standard: f_i = E_{i+1,i}, e_i = E_{i,i+1}, e0 = zeta E_{n+1,1} -----
inline MatrixRep rep_A_standard(int n, Complex k) {
    if (n < 1) throw DomainError("rep_A_standard: n >= 1");
    const Eigen::Index d = n + 1;
    MatrixRep r;
    r.kind = {Family::A, n};
    r.dim = d;
    for (int i = 0; i < n; ++i) {
        r.E.push_back(detail::unit(d, i, i + 1));
        r.F.push_back(detail::unit(d, i + 1, i));
        r.H.push_back(detail::unit(d, i, i) - detail::unit(d, i + 1, i + 1));
    }
    r.E0 = detail::unit(d, d - 1, 0, std::exp(2.0 * kPi * kI * k));
    r.h = detail::grading_from_cartans(cartan_data(r.kind), r.H);
    r.metric = RealVector::Ones(d);
    r.twist = k;
    r.label = "V(1) of A" + std::to_string(n);
    return r;
}

// ----- D_n standard (dim 2n), o_{2n} via the anti-transpose pairing -----
inline MatrixRep rep_D_standard(int n, Complex k) {
    if (n < 3) throw DomainError("rep_D_standard: n >= 3");
    const Eigen::Index d = 2 * n;
    auto pr = [n](int i) { return 2 * n + 1 - i; };  // 1-based involution
    auto Fm = [&](int i, int j) {
        Matrix m = Matrix::Zero(d, d);
        m(i - 1, j - 1) += 1.0;
        m(pr(j) - 1, pr(i) - 1) += ((i + j + 1) % 2 == 0) ? 1.0 : -1.0;
        return m;
    };
    auto Ft = [&](int i, int j) {
        Matrix m = Matrix::Zero(d, d);
        m(i - 1, pr(j) - 1) += 1.0;
        m(j - 1, pr(i) - 1) += ((i + j + 1) % 2 == 0) ? 1.0 : -1.0;
        return m;
    };
    MatrixRep r;
    r.kind = {Family::D, n};
    r.dim = d;
    for (int i = 1; i < n; ++i) {
        r.E.push_back(Fm(i, i + 1));
        r.F.push_back(Fm(i + 1, i));
        r.H.push_back(Fm(i, i) - Fm(i + 1, i + 1));
    }
    r.E.push_back(0.5 * Ft(n - 1, n));
    r.F.push_back(2.0 * Ft(pr(n), pr(n - 1)));
    r.H.push_back(Fm(n - 1, n - 1) + Fm(n, n));
    r.E0 = 0.5 * std::exp(2.0 * kPi * kI * k) * Ft(2 * n - 1, 2 * n);
    r.h = detail::grading_from_cartans(cartan_data(r.kind), r.H);
    r.metric = RealVector::Ones(d);
    r.metric.tail(n).setConstant(0.25);  // makes adjoint(e_n) = f_n under the form
    r.twist = k;
    r.label = "V(1) of D" + std::to_string(n);

    // G S + S G^at = 0 self-check for every generator
    Matrix S = Matrix::Zero(d, d);
    for (int kk = 1; kk <= n; ++kk) {
        double s = (kk % 2 == 1) ? 1.0 : -1.0;
        S(kk - 1, kk - 1) += s;
        S(pr(kk) - 1, pr(kk) - 1) += s;
    }
    auto at = [&](const Matrix& A) {
        Matrix T(d, d);
        for (int i = 1; i <= d; ++i)
            for (int j = 1; j <= d; ++j) T(i - 1, j - 1) = A(d - j, d - i);
        return T;
    };
    auto check = [&](const Matrix& G) {
        if (max_abs(G * S + S * at(G)) > 1e-14) throw ConstructionError("o_{2n} pairing violated");
    };
    for (const auto& g : r.E) check(g);
    for (const auto& g : r.F) check(g);
    for (const auto& g : r.H) check(g);
    check(r.E0 / r.zeta());
    return r;
}

// ----- wedge and Kronecker lifts -----
namespace detail {

inline std::vector<std::vector<int>> combinations(int dim, int p) {
    std::vector<std::vector<int>> out;
    std::vector<int> c(p);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        out.push_back(c);
        int i = p - 1;
        while (i >= 0 && c[i] == dim - p + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < p; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

inline int insertion_sign_and_sort(std::vector<int>& v) {
    int s = 1;
    for (size_t i = 1; i < v.size(); ++i)
        for (size_t j = i; j > 0 && v[j] < v[j - 1]; --j) {
            std::swap(v[j], v[j - 1]);
            s = -s;
        }
    return s;
}

// derivation action on wedge^p coordinates
inline Matrix wedge_lift(const Matrix& A, int dim, int p,
                         const std::vector<std::vector<int>>& idx) {
    std::map<std::vector<int>, int> pos;
    for (size_t a = 0; a < idx.size(); ++a) pos[idx[a]] = static_cast<int>(a);
    Matrix out = Matrix::Zero(idx.size(), idx.size());
    for (size_t a = 0; a < idx.size(); ++a) {
        for (int slot = 0; slot < p; ++slot) {
            const int col = idx[a][slot];
            for (int row = 0; row < dim; ++row) {
                const Complex v = A(row, col);
                if (v == 0.0) continue;
                std::vector<int> nc = idx[a];
                nc[slot] = row;
                bool dup = false;
                for (int t = 0; t < p; ++t)
                    if (t != slot && nc[t] == row) dup = true;
                if (dup) continue;
                int s = insertion_sign_and_sort(nc);
                out(pos[nc], a) += double(s) * v;
            }
        }
    }
    return out;
}

}  // namespace detail

inline MatrixRep exterior_power(const MatrixRep& rep, int p) {
    if (p < 1 || p > rep.dim) throw DomainError("exterior_power: p out of range");
    auto idx = detail::combinations(static_cast<int>(rep.dim), p);
    MatrixRep r;
    r.kind = rep.kind;
    r.dim = static_cast<Eigen::Index>(idx.size());
    auto lift = [&](const Matrix& A) { return detail::wedge_lift(A, static_cast<int>(rep.dim), p, idx); };
    for (const auto& m : rep.E) r.E.push_back(lift(m));
    for (const auto& m : rep.F) r.F.push_back(lift(m));
    for (const auto& m : rep.H) r.H.push_back(lift(m));
    r.E0 = lift(rep.E0);
    r.h = lift(rep.h);
    r.metric.resize(r.dim);
    for (size_t a = 0; a < idx.size(); ++a) {
        double g = 1;
        for (int i : idx[a]) g *= rep.metric[i];
        r.metric[static_cast<Eigen::Index>(a)] = g;
    }
    r.twist = rep.twist;
    r.label = "wedge^" + std::to_string(p) + "(" + rep.label + ")";
    return r;
}

inline MatrixRep tensor_product(const std::vector<MatrixRep>& reps) {
    if (reps.empty()) throw DomainError("tensor_product: empty list");
    for (const auto& r : reps) {
        if (r.kind.family != reps[0].kind.family || r.kind.rank != reps[0].kind.rank)
            throw DomainError("tensor_product: algebra mismatch");
        if (std::abs(r.zeta() - reps[0].zeta()) > 1e-12)
            throw DomainError("tensor_product: evaluation parameter mismatch");
    }
    MatrixRep acc = reps[0];
    for (size_t t = 1; t < reps.size(); ++t) {
        const MatrixRep& b = reps[t];
        MatrixRep r;
        r.kind = acc.kind;
        r.dim = acc.dim * b.dim;
        if (r.dim > 8192) throw DomainError("tensor_product: dimension too large");
        auto lift = [&](const Matrix& A, const Matrix& B) {
            Matrix out = Matrix::Zero(r.dim, r.dim);
            // A (x) I + I (x) B
            for (Eigen::Index i = 0; i < acc.dim; ++i)
                for (Eigen::Index j = 0; j < acc.dim; ++j)
                    if (A(i, j) != 0.0)
                        for (Eigen::Index k = 0; k < b.dim; ++k) out(i * b.dim + k, j * b.dim + k) += A(i, j);
            for (Eigen::Index k = 0; k < acc.dim; ++k)
                for (Eigen::Index i = 0; i < b.dim; ++i)
                    for (Eigen::Index j = 0; j < b.dim; ++j)
                        if (B(i, j) != 0.0) out(k * b.dim + i, k * b.dim + j) += B(i, j);
            return out;
        };
        for (int i = 0; i < acc.n(); ++i) {
            r.E.push_back(lift(acc.E[i], b.E[i]));
            r.F.push_back(lift(acc.F[i], b.F[i]));
            r.H.push_back(lift(acc.H[i], b.H[i]));
        }
        r.E0 = lift(acc.E0, b.E0);
        r.h = lift(acc.h, b.h);
        r.metric.resize(r.dim);
        for (Eigen::Index i = 0; i < acc.dim; ++i)
            for (Eigen::Index k = 0; k < b.dim; ++k) r.metric[i * b.dim + k] = acc.metric[i] * b.metric[k];
        r.twist = acc.twist;
        r.label = acc.label + " (x) " + b.label;
        acc = std::move(r);
    }
    return acc;
}

// shift the evaluation parameter: V_k -> V_{k + dk}
inline MatrixRep twisted(MatrixRep rep, Complex dk) {
    rep.E0 *= std::exp(2.0 * kPi * kI * dk);
    rep.twist += dk;
    return rep;
}

// ----- half-spin pair for D_n -----
//
// Fermionic construction on the 2^{n-1}-dimensional even/odd subspaces of
// the n-mode Fock space: e_i = a_i^+ a_{i+1}, e_n = a_{n-1}^+ a_n^+. The
// affine generator is obtained from the same nested bracket word in the f_i
// that produces e0 in the standard representation, so both representations
// realize the same abstract element. Validated by the Chevalley/grading
// residual check below.
inline std::pair<MatrixRep, MatrixRep> spin_reps_D(int n, Complex k) {
    if (n < 3) throw DomainError("spin_reps_D: n >= 3");
    const int full = 1 << n;
    auto ann = [&](int mode) {  // Jordan-Wigner
        Matrix A = Matrix::Zero(full, full);
        for (int S = 0; S < full; ++S)
            if (S & (1 << mode)) {
                int lower = S & ((1 << mode) - 1);
                double sgn = (__builtin_popcount(lower) % 2 == 0) ? 1.0 : -1.0;
                A(S ^ (1 << mode), S) = sgn;
            }
        return A;
    };
    std::vector<Matrix> a(n), ad(n);
    for (int i = 0; i < n; ++i) {
        a[i] = ann(i);
        ad[i] = a[i].adjoint();
    }
    std::vector<Matrix> E, F, H;
    for (int i = 0; i + 1 < n; ++i) {
        E.push_back(ad[i] * a[i + 1]);
        F.push_back(ad[i + 1] * a[i]);
        H.push_back(ad[i] * a[i] - ad[i + 1] * a[i + 1]);
    }
    E.push_back(ad[n - 2] * ad[n - 1]);
    F.push_back(a[n - 1] * a[n - 2]);
    H.push_back(ad[n - 2] * a[n - 2] + ad[n - 1] * a[n - 1] - Matrix::Identity(full, full));

    // bracket word for e0 taken from the standard representation
    MatrixRep std_rep = rep_D_standard(n, 0.0);
    Matrix target = std_rep.E0;
    struct Item { std::vector<int> word; Matrix m; };
    std::vector<Item> queue;
    for (int i = 0; i < n; ++i) queue.push_back({{i}, std_rep.F[i]});
    std::vector<int> word;
    Complex kappa = 0.0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        const Item it = queue[qi];
        Complex co = (target.conjugate().cwiseProduct(it.m)).sum() / (target.conjugate().cwiseProduct(target)).sum();
        if (std::abs(co) > 1e-10 && max_abs(it.m - co * target) < 1e-10 * max_abs(it.m)) {
            word = it.word;
            kappa = 1.0 / co;
            break;
        }
        if (it.word.size() >= static_cast<size_t>(2 * n)) continue;
        for (int i = 0; i < n; ++i) {
            Matrix nm = commutator(std_rep.F[i], it.m);
            if (max_abs(nm) > 1e-12) {
                std::vector<int> w = it.word;
                w.insert(w.begin(), i);
                queue.push_back({std::move(w), std::move(nm)});
            }
        }
    }
    if (word.empty()) throw ConstructionError("spin_reps_D: lowest-root bracket word not found");
    Matrix e0_full = F[word.back()];
    for (int t = static_cast<int>(word.size()) - 2; t >= 0; --t) e0_full = commutator(F[word[t]], e0_full);
    e0_full *= kappa;

    const Complex zeta = std::exp(2.0 * kPi * kI * k);
    CartanData cd = cartan_data({Family::D, n});
    auto build = [&](int par, const char* lbl) {
        std::vector<int> idx;
        for (int S = 0; S < full; ++S)
            if (__builtin_popcount(S) % 2 == par) idx.push_back(S);
        auto restrict_to = [&](const Matrix& M) {
            Matrix R(idx.size(), idx.size());
            for (size_t i = 0; i < idx.size(); ++i)
                for (size_t j = 0; j < idx.size(); ++j) R(i, j) = M(idx[i], idx[j]);
            return R;
        };
        MatrixRep r;
        r.kind = {Family::D, n};
        r.dim = static_cast<Eigen::Index>(idx.size());
        for (int i = 0; i < n; ++i) {
            r.E.push_back(restrict_to(E[i]));
            r.F.push_back(restrict_to(F[i]));
            r.H.push_back(restrict_to(H[i]));
        }
        r.E0 = zeta * restrict_to(e0_full);
        r.h = detail::grading_from_cartans(cd, r.H);
        r.metric = RealVector::Ones(r.dim);
        r.twist = k;
        r.label = std::string(lbl) + " of D" + std::to_string(n);
        if (rep_residual(r, cd) > 1e-12) throw ConstructionError("spin_reps_D: relation self-check failed");
        return r;
    };
    // occupation parity n-1 carries highest weight (1/2,...,1/2,-1/2) -> node n-1,
    // parity n carries (1/2,...,1/2) -> node n
    MatrixRep minus = build((n - 1) % 2, "V(n-1)");
    MatrixRep plus = build(n % 2, "V(n)");
    return {minus, plus};
}

// ----- fundamental representations V^(i) = L(omega_i) twisted by p(i)/2 -----
inline MatrixRep fundamental_rep(const CartanData& cd, int node) {
    const int n = cd.rank();
    if (node < 1 || node > n) throw DomainError("fundamental_rep: node out of range");
    if (cd.kind.family == Family::E)
        throw DomainError("fundamental_rep: E-series representation matrices unsupported");
    if (cd.kind.family == Family::A) {
        MatrixRep base = rep_A_standard(n, Complex(node - 1) / 2.0);
        MatrixRep r = node == 1 ? base : exterior_power(base, node);
        r.label = "V(" + std::to_string(node) + ") of A" + std::to_string(n);
        return r;
    }
    // D family
    if (node <= n - 2) {
        MatrixRep base = rep_D_standard(n, Complex(node - 1) / 2.0);
        MatrixRep r = node == 1 ? base : exterior_power(base, node);
        r.label = "V(" + std::to_string(node) + ") of D" + std::to_string(n);
        return r;
    }
    auto [vm, vp] = spin_reps_D(n, Complex(n) / 2.0);
    return node == n - 1 ? vm : vp;
}

// ----- spectra -----
struct MaximalEigenpair {
    Complex lambda;
    Vector psi;        // phase-normalized right eigenvector
    double gap;        // lambda - max real part of the others
    Vector left;       // matching left eigenvector row
    Matrix pinv;       // pseudo-inverse of (Lambda - lambda) on the complement
    Matrix projector;  // spectral projector onto psi
};

struct SpectrumReport {
    Vector eigenvalues;
    std::optional<MaximalEigenpair> maximal;
};

inline SpectrumReport maximal_eigenpair(const MatrixRep& rep, double gap_tol = 1e-8,
                                        double imag_tol = 1e-10) {
    Matrix L = lambda_matrix(rep);
    Eigensystem es = eigensystem(L);
    SpectrumReport rep_out;
    rep_out.eigenvalues = es.values;
    const int k = argmax_real(es.values);
    const Complex lam = es.values[k];
    double gap = std::numeric_limits<double>::infinity();
    double closest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < es.values.size(); ++i) {
        if (i == k) continue;
        gap = std::min(gap, lam.real() - es.values[i].real());
        closest = std::min(closest, std::abs(es.values[i] - lam));
    }
    if (rep.dim == 1) gap = closest = std::numeric_limits<double>::infinity();
    if (std::abs(lam.imag()) > imag_tol || gap < gap_tol || closest < gap_tol) return rep_out;

    MaximalEigenpair mx;
    mx.lambda = lam;
    mx.gap = gap;
    Vector raw = es.right.col(k);
    int j = 0;
    for (int i = 1; i < raw.size(); ++i)
        if (std::abs(raw[i]) > std::abs(raw[j])) j = i;
    const Complex scale = raw[j] / std::abs(raw[j]);  // raw = scale * psi
    mx.psi = raw / scale;
    mx.left = es.left.row(k).transpose() * scale;  // left^T * psi = 1, no conjugation
    Vector dinv = Vector::Zero(es.values.size());
    for (int i = 0; i < es.values.size(); ++i)
        if (i != k) dinv[i] = 1.0 / (es.values[i] - lam);
    mx.pinv = es.right * dinv.asDiagonal() * es.left;
    mx.projector = es.right.col(k) * es.left.row(k);
    rep_out.maximal = std::move(mx);
    return rep_out;
}

// exp(a h); h is diagonal in every basis used here
inline Matrix exp_h(const MatrixRep& rep, Complex a) {
    if ((rep.h - Matrix(rep.h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 1e-13)
        throw ConstructionError("grading element expected diagonal");
    Vector d(rep.dim);
    for (Eigen::Index i = 0; i < rep.dim; ++i) d[i] = std::exp(a * rep.h(i, i));
    return d.asDiagonal();
}

// gamma^{k h} = exp(k log(gamma) h)
inline Matrix gamma_h_twist(const MatrixRep& rep, Complex gamma, Complex k) {
    return exp_h(rep, k * std::log(gamma));
}

}  // namespace odeim

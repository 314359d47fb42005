#pragma once

/// The morphisms m_i : wedge^2 V^(i)_{1/2} -> (x)_j V^(j)^{(x) B_ij}.
///
/// Construction: the highest-weight pair u0 = f_i v_i ^ v_i and
/// w0 = (x)_j v_j is propagated by words in the lowering operators on both
/// sides simultaneously. The words span the common irreducible summand W;
/// m_i acts on W by word matching and kills the orthogonal complement of W
/// under the contravariant form, which is the sum of the other summands.

#include <deque>
#include <string>
#include <vector>

#include "odeim/rep.hpp"

namespace odeim {

// coordinates of u ^ v in the lexicographic wedge^2 basis used by exterior_power
inline Vector wedge_embed(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw DomainError("wedge_embed: dimension mismatch");
    const Eigen::Index d = u.size();
    Vector out(d * (d - 1) / 2);
    Eigen::Index a = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) out[a++] = u[i] * v[j] - u[j] * v[i];
    return out;
}

// Kronecker coordinates of v1 (x) v2 (x) ... in tensor_product's basis order
inline Vector tensor_embed(const std::vector<Vector>& vs) {
    if (vs.empty()) throw DomainError("tensor_embed: empty list");
    Vector acc = vs[0];
    for (size_t t = 1; t < vs.size(); ++t) {
        Vector nxt(acc.size() * vs[t].size());
        for (Eigen::Index i = 0; i < acc.size(); ++i)
            nxt.segment(i * vs[t].size(), vs[t].size()) = acc[i] * vs[t];
        acc = std::move(nxt);
    }
    return acc;
}

struct Intertwiner {
    std::string source_label, target_label;
    Eigen::Index dim_src = 0, dim_tgt = 0, dim_w = 0;
    // m(v) = tgt_basis * R^{-1} Q^H sqrt(G) v ; columns of Q span sqrt(G) W
    Matrix tgt_basis;
    Matrix Q;
    Matrix R;
    RealVector sqrt_metric;

    Vector apply(const Vector& v) const {
        if (v.size() != dim_src) throw DomainError("intertwiner: dimension mismatch");
        Vector coords = R.triangularView<Eigen::Upper>().solve(
            Q.adjoint() * (sqrt_metric.asDiagonal() * v));
        return tgt_basis * coords;
    }

    Matrix dense() const {
        Matrix m(dim_tgt, dim_src);
        Vector e = Vector::Zero(dim_src);
        for (Eigen::Index j = 0; j < dim_src; ++j) {
            e[j] = 1.0;
            m.col(j) = apply(e);
            e[j] = 0.0;
        }
        return m;
    }
};

// word-matching construction; src/tgt must carry matching node actions
inline Intertwiner build_intertwiner_from(const MatrixRep& src, const MatrixRep& tgt,
                                          const Vector& u0, const Vector& w0,
                                          double rank_tol = 1e-9) {
    Intertwiner m;
    m.source_label = src.label;
    m.target_label = tgt.label;
    m.dim_src = src.dim;
    m.dim_tgt = tgt.dim;
    m.sqrt_metric = src.metric.cwiseSqrt();

    std::vector<Vector> cols_a{u0}, cols_b{w0};
    std::vector<Vector> ortho;  // orthonormal in the sqrt(G) image
    {
        Vector g = m.sqrt_metric.asDiagonal() * u0;
        ortho.push_back(g / g.norm());
    }
    std::deque<size_t> work{0};
    while (!work.empty()) {
        size_t at = work.front();
        work.pop_front();
        for (int i = 0; i < src.n(); ++i) {
            Vector na = src.F[i] * cols_a[at];
            double scale = na.norm();
            if (scale < 1e-13) continue;
            Vector g = m.sqrt_metric.asDiagonal() * na;
            Vector r = g;
            for (const auto& q : ortho) r -= q.dot(r) * q;
            for (const auto& q : ortho) r -= q.dot(r) * q;  // second MGS pass
            if (r.norm() > rank_tol * g.norm()) {
                ortho.push_back(r / r.norm());
                cols_a.push_back(na);
                cols_b.push_back(tgt.F[i] * cols_b[at]);
                work.push_back(cols_a.size() - 1);
            }
        }
    }
    m.dim_w = static_cast<Eigen::Index>(cols_a.size());
    Matrix A(src.dim, m.dim_w), B(tgt.dim, m.dim_w);
    for (Eigen::Index j = 0; j < m.dim_w; ++j) {
        A.col(j) = cols_a[j];
        B.col(j) = cols_b[j];
    }
    Eigen::HouseholderQR<Matrix> qr(m.sqrt_metric.asDiagonal() * A);
    m.Q = Matrix(qr.householderQ()).leftCols(m.dim_w);
    m.R = qr.matrixQR().topRows(m.dim_w).triangularView<Eigen::Upper>();
    {
        Eigen::Index k = m.dim_w - 1;
        if (std::abs(m.R(k, k)) < rank_tol * std::abs(m.R(0, 0)))
            throw ConstructionError("build_intertwiner: word span rank-deficient");
    }
    m.tgt_basis = B;
    return m;
}

// equivariance residual over all Chevalley generators and e0 (relative)
inline double intertwiner_residual(const Intertwiner& m, const MatrixRep& src, const MatrixRep& tgt) {
    Matrix D = m.dense();
    double scale = std::max(1.0, max_abs(D));
    double r = 0;
    auto chk = [&](const Matrix& gs, const Matrix& gt) {
        r = std::max(r, max_abs(D * gs - gt * D) / scale);
    };
    for (int i = 0; i < src.n(); ++i) {
        chk(src.E[i], tgt.E[i]);
        chk(src.F[i], tgt.F[i]);
        chk(src.H[i], tgt.H[i]);
    }
    chk(src.E0, tgt.E0);
    return r;
}

}  // namespace odeim

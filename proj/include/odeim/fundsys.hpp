#pragma once

/// All fundamental representations of one algebra wired together: the wedge
/// squares, the neighbor tensor products, the intertwiners m_i, and the
/// eigenvector normalization that makes the quadratic solution identities
/// hold with constant one.
///
/// Orientation convention. The rotated eigenvectors are psi_k = gamma^{-k h}
/// psi, so the wedge of solutions Psi_{-1/2} ^ Psi_{+1/2} approaches
/// (gamma^{+h/2} psi) ^ (gamma^{-h/2} psi). The eigenvectors are rescaled so
/// that m_i applied to *that* wedge equals (x)_j psi_j^{(x) B_ij}; the rank-1
/// case then gives the classical unit Wronskian. (With the opposite wedge
/// orientation every identity picks up a factor -1.)

#include <vector>

#include "odeim/intertwiner.hpp"
#include "odeim/rep.hpp"

namespace odeim {

struct NodeData {
    MatrixRep V;            // fundamental representation V^(i)
    MatrixRep wedge;        // wedge^2 V^(i)_{1/2}
    MatrixRep tensor;       // M^(i) = (x)_j V^(j)^{(x)B_ij} (ascending j)
    Intertwiner m;          // wedge -> tensor
    MaximalEigenpair top;   // of Lambda on V^(i); psi already c = 1 rescaled
    Complex psi_scale;      // rescale factor applied to the raw phase-normalized psi
};

struct FundamentalSystem {
    CartanData cartan;
    std::vector<NodeData> node;  // 1-based access through operator()

    const NodeData& operator()(int i) const { return node.at(i - 1); }
    NodeData& operator()(int i) { return node.at(i - 1); }

    // factor between c=1-normalized psi and the raw solver psi of a rep;
    // solution traces built against the raw psi get multiplied by this
    Complex trace_scale(int i) const { return node.at(i - 1).psi_scale; }
};

inline FundamentalSystem build_fundamental_system(const CartanData& cd) {
    if (cd.kind.family == Family::E)
        throw DomainError("fundamental system: E-series representations unsupported");
    const int n = cd.rank();
    FundamentalSystem fs;
    fs.cartan = cd;
    fs.node.resize(n);

    for (int i = 1; i <= n; ++i) fs.node[i - 1].V = fundamental_rep(cd, i);

    // highest-weight vectors: weight of v under H_j is delta_{ij}
    auto highest_vector = [&](const MatrixRep& rep, int i) {
        // the constructions all place v_i at a basis vector; find it by weights
        for (Eigen::Index b = 0; b < rep.dim; ++b) {
            bool ok = true;
            for (int j = 0; j < n && ok; ++j) {
                Complex w = rep.H[j](b, b);
                double want = (j == i - 1) ? 1.0 : 0.0;
                if (std::abs(w - want) > 1e-9) ok = false;
            }
            if (!ok) continue;
            Vector v = Vector::Zero(rep.dim);
            v[b] = 1.0;
            bool killed = true;
            for (int j = 0; j < n && killed; ++j)
                if ((rep.E[j] * v).norm() > 1e-10) killed = false;
            if (killed) return v;
        }
        throw ConstructionError("highest-weight vector not found for node " + std::to_string(i));
    };

    for (int i = 1; i <= n; ++i) {
        NodeData& nd = fs.node[i - 1];
        nd.wedge = exterior_power(twisted(nd.V, 0.5), 2);
        std::vector<MatrixRep> factors;
        std::vector<Vector> hw_factors;
        for (int j = 1; j <= n; ++j)
            if (cd.B(i - 1, j - 1) == 1) {
                factors.push_back(fs.node[j - 1].V);
                hw_factors.push_back(highest_vector(fs.node[j - 1].V, j));
            }
        nd.tensor = factors.empty() ? trivial_rep(cd.kind) : tensor_product(factors);
        nd.tensor.label = "M(" + std::to_string(i) + ") of " + cd.kind.name();

        Vector vi = highest_vector(nd.V, i);
        Vector u0 = wedge_embed(fs.node[i - 1].V.F[i - 1] * vi, vi);
        Vector w0 = factors.empty() ? Vector::Ones(1) : tensor_embed(hw_factors);
        nd.m = build_intertwiner_from(nd.wedge, nd.tensor, u0, w0);

        SpectrumReport sr = maximal_eigenpair(nd.V);
        if (!sr.maximal)
            throw ConstructionError("fundamental rep without maximal eigenvalue at node " +
                                    std::to_string(i));
        nd.top = *sr.maximal;
        nd.psi_scale = 1.0;
    }

    // wedge normalization constants c_i, then rescale log-linearly:
    // 2 log a_i - sum_j B_ij log a_j = -log c_i  <=>  C log a = -log c
    const Phases ph = phases(cd, 1.0);  // gamma only depends on hvee
    Vector logc(n);
    for (int i = 1; i <= n; ++i) {
        NodeData& nd = fs.node[i - 1];
        Vector minus = gamma_h_twist(nd.V, ph.gamma, +0.5) * nd.top.psi;  // psi_{-1/2}
        Vector plus = gamma_h_twist(nd.V, ph.gamma, -0.5) * nd.top.psi;  // psi_{+1/2}
        Vector lhs = nd.m.apply(wedge_embed(minus, plus));
        std::vector<Vector> ps;
        for (int j = 1; j <= n; ++j)
            if (cd.B(i - 1, j - 1) == 1) ps.push_back(fs.node[j - 1].top.psi);
        Vector rhs = ps.empty() ? Vector::Ones(1) : tensor_embed(ps);
        Complex c = parallel_coefficient(lhs, rhs, 1e-8, "psi wedge normalization");
        if (std::abs(c) < 1e-12) throw ConstructionError("degenerate wedge normalization");
        logc[i - 1] = std::log(c);
    }
    Eigen::MatrixXcd C = cd.C.cast<double>().cast<Complex>();
    Vector loga = C.fullPivLu().solve(Vector(-logc));
    for (int i = 1; i <= n; ++i) {
        fs.node[i - 1].psi_scale = std::exp(loga[i - 1]);
        fs.node[i - 1].top.psi *= fs.node[i - 1].psi_scale;
        fs.node[i - 1].top.left /= fs.node[i - 1].psi_scale;
    }
    return fs;
}

// residual of the c = 1 property after normalization (idempotence check)
inline double wedge_normalization_residual(const FundamentalSystem& fs) {
    const Phases ph = phases(fs.cartan, 1.0);
    const int n = fs.cartan.rank();
    double worst = 0;
    for (int i = 1; i <= n; ++i) {
        const NodeData& nd = fs.node[i - 1];
        Vector minus = gamma_h_twist(nd.V, ph.gamma, +0.5) * nd.top.psi;
        Vector plus = gamma_h_twist(nd.V, ph.gamma, -0.5) * nd.top.psi;
        Vector lhs = nd.m.apply(wedge_embed(minus, plus));
        std::vector<Vector> ps;
        for (int j = 1; j <= n; ++j)
            if (fs.cartan.B(i - 1, j - 1) == 1) ps.push_back(fs.node[j - 1].top.psi);
        Vector rhs = ps.empty() ? Vector::Ones(1) : tensor_embed(ps);
        worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
    }
    return worst;
}

}  // namespace odeim

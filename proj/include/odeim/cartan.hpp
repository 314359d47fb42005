#pragma once

/// Static Dynkin/Cartan data for the simply-laced families and the
/// Perron-Frobenius mass vector of the incidence matrix.

#include <cmath>
#include <string>
#include <vector>

#include "odeim/types.hpp"

namespace odeim {

enum class Family { A, D, E };

struct AlgebraKind {
    Family family;
    int rank;

    std::string name() const {
        const char* f = family == Family::A ? "A" : family == Family::D ? "D" : "E";
        return f + std::to_string(rank);
    }
};

inline AlgebraKind parse_algebra(const std::string& s) {
    if (s.size() < 2) throw DomainError("bad algebra name: " + s);
    Family f;
    switch (s[0]) {
        case 'A': case 'a': f = Family::A; break;
        case 'D': case 'd': f = Family::D; break;
        case 'E': case 'e': f = Family::E; break;
        default: throw DomainError("bad algebra family: " + s);
    }
    int rank = 0;
    try {
        rank = std::stoi(s.substr(1));
    } catch (...) {
        throw DomainError("bad algebra rank: " + s);
    }
    return AlgebraKind{f, rank};
}

struct CartanData {
    AlgebraKind kind;
    IntMatrix C;             // Cartan matrix
    IntMatrix B;             // incidence matrix, B = 2*Id - C
    int hvee = 0;            // dual Coxeter number
    std::vector<int> parity; // the 2-coloring p : node -> {0,1}
    RealVector pf;           // Perron-Frobenius vector, pf[0] = 1

    int rank() const { return kind.rank; }
};

namespace detail {

// edge list per the standard diagrams: chains for A/D with the D fork at
// node n-2; for the E series the branch node sits above the chain
// (E6: 4 above 3, E7: 5 above 4, E8: 6 above 5).
inline std::vector<std::pair<int, int>> dynkin_edges(AlgebraKind kind) {
    const int n = kind.rank;
    std::vector<std::pair<int, int>> ed;
    auto chain = [&](std::vector<int> nodes) {
        for (size_t i = 0; i + 1 < nodes.size(); ++i) ed.emplace_back(nodes[i], nodes[i + 1]);
    };
    switch (kind.family) {
        case Family::A:
            if (n < 1) throw DomainError("A_n needs n >= 1");
            for (int i = 1; i < n; ++i) ed.emplace_back(i, i + 1);
            break;
        case Family::D:
            if (n < 3) throw DomainError("D_n needs n >= 3");
            for (int i = 1; i < n - 1; ++i) ed.emplace_back(i, i + 1);
            ed.back() = {n - 2, n - 1};
            ed.emplace_back(n - 2, n);
            break;
        case Family::E:
            if (n == 6) { chain({1, 2, 3, 5, 6}); ed.emplace_back(3, 4); }
            else if (n == 7) { chain({1, 2, 3, 4, 6, 7}); ed.emplace_back(4, 5); }
            else if (n == 8) { chain({1, 2, 3, 4, 5, 7, 8}); ed.emplace_back(5, 6); }
            else throw DomainError("E_n needs n in {6,7,8}");
            break;
    }
    return ed;
}

inline int dual_coxeter(AlgebraKind kind) {
    switch (kind.family) {
        case Family::A: return kind.rank + 1;
        case Family::D: return 2 * kind.rank - 2;
        case Family::E: return kind.rank == 6 ? 12 : kind.rank == 7 ? 18 : 30;
    }
    return 0;
}

}  // namespace detail

// Power iteration on B with one Rayleigh refinement. B is small, symmetric
// and irreducible, and its top eigenvalue 2 cos(pi/hvee) is simple.
inline RealVector pf_vector_of(const IntMatrix& B, int hvee) {
    const int n = static_cast<int>(B.rows());
    Eigen::MatrixXd Bd = B.cast<double>();
    // shift makes the target eigenvalue strictly dominant in modulus
    Eigen::MatrixXd P = Bd + 2.0 * Eigen::MatrixXd::Identity(n, n);
    RealVector v = RealVector::Ones(n);
    v.normalize();
    for (int it = 0; it < 400; ++it) {
        RealVector w = P * v;
        w.normalize();
        if ((w - v).norm() < 1e-15) { v = w; break; }
        v = w;
    }
    // refinement at the Rayleigh shift with the first entry pinned to 1:
    // rows 2..n of (B - mu I) v = 0 become a nonsingular system for v[1:]
    if (v[0] < 0) v = -v;
    v /= v[0];
    if (n > 1) {
        const double mu = v.dot(Bd * v) / v.squaredNorm();
        Eigen::MatrixXd R = Bd - mu * Eigen::MatrixXd::Identity(n, n);
        Eigen::MatrixXd sub = R.block(1, 0, n - 1, n).rightCols(n - 1);
        RealVector rhs = -R.block(1, 0, n - 1, 1);
        RealVector tail = sub.fullPivLu().solve(rhs);
        if (tail.allFinite()) v.tail(n - 1) = tail;
    }
    const double target = 2.0 * std::cos(kPi / hvee);
    if ((Bd * v - target * v).lpNorm<Eigen::Infinity>() > 1e-12)
        throw ConstructionError("Perron-Frobenius iteration failed to converge");
    return v;
}

inline CartanData cartan_data(AlgebraKind kind) {
    const int n = kind.rank;
    auto edges = detail::dynkin_edges(kind);
    CartanData cd;
    cd.kind = kind;
    cd.hvee = detail::dual_coxeter(kind);
    cd.B = IntMatrix::Zero(n, n);
    for (auto [i, j] : edges) {
        cd.B(i - 1, j - 1) = 1;
        cd.B(j - 1, i - 1) = 1;
    }
    cd.C = 2 * IntMatrix::Identity(n, n) - cd.B;
    // parity: p(1) = 0, p(i) = p(j) + 1 for an earlier neighbor j
    cd.parity.assign(n, -1);
    cd.parity[0] = 0;
    for (int i = 1; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            if (cd.B(i, j) == 1 && cd.parity[j] >= 0) {
                cd.parity[i] = (cd.parity[j] + 1) % 2;
                break;
            }
        }
        if (cd.parity[i] < 0) throw ConstructionError("node ordering not inductive");
    }
    cd.pf = pf_vector_of(cd.B, cd.hvee);
    return cd;
}

inline RealVector pf_vector(const CartanData& data) { return data.pf; }

struct Phases {
    Complex gamma;  // e^{2 pi i / hvee}
    Complex omega;  // e^{2 pi i / (hvee (M+1))}
    Complex Omega;  // omega^{hvee M}
    double hvee;
    double M;

    // z-th power defined through the generating exponent, not a principal log;
    // keeps all phase bookkeeping on one branch convention.
    Complex omega_pow(Complex z) const { return std::exp(z * Complex(0.0, 2.0 * kPi / (hvee * (M + 1.0)))); }
    Complex Omega_pow(Complex z) const { return omega_pow(z * hvee * M); }
    Complex gamma_pow(Complex z) const { return std::exp(z * Complex(0.0, 2.0 * kPi / hvee)); }
};

inline Phases phases(const CartanData& data, double M) {
    if (!(M > 0)) throw DomainError("M must be positive");
    Phases p;
    p.hvee = data.hvee;
    p.M = M;
    p.gamma = p.gamma_pow(1.0);
    p.omega = p.omega_pow(1.0);
    p.Omega = p.Omega_pow(1.0);
    return p;
}

// Closed forms: A_n from the sine ratio, D_n from the sine ratio plus the
// two equal fork values, E types tabulated. The E6 branch-node entry is
// sin(pi/4)/sin(pi/6); with denominator sin(pi/12) it would fail the
// eigenvector equation B pf = 2 cos(pi/hvee) pf.
inline RealVector pf_closed_form(const CartanData& cd) {
    const int n = cd.rank();
    const double h = cd.hvee;
    RealVector v(n);
    auto sr = [](double a, double b) { return std::sin(a) / std::sin(b); };
    switch (cd.kind.family) {
        case Family::A:
            for (int i = 1; i <= n; ++i) v[i - 1] = sr(i * kPi / h, kPi / h);
            break;
        case Family::D:
            for (int i = 1; i <= n - 2; ++i) v[i - 1] = sr(i * kPi / h, kPi / h);
            v[n - 2] = v[n - 1] = 1.0 / (2.0 * std::sin(kPi / h));
            break;
        case Family::E: {
            const double p = kPi;
            if (n == 6)
                v << 1, sr(p / 6, p / 12), sr(p / 4, p / 12), sr(p / 4, p / 6), sr(p / 6, p / 12), 1;
            else if (n == 7)
                v << 1, sr(p / 9, p / 18), sr(p / 6, p / 18), sr(2 * p / 9, p / 18), sr(2 * p / 9, p / 9),
                    std::sin(p / 9) * std::sin(2 * p / 9) / (std::sin(p / 6) * std::sin(p / 18)),
                    sr(2 * p / 9, p / 6);
            else
                v << 1, sr(2 * p / 30, p / 30), sr(p / 10, p / 30), sr(2 * p / 15, p / 30), sr(p / 6, p / 30),
                    sr(p / 6, p / 15),
                    std::sin(p / 6) * std::sin(p / 15) / (std::sin(p / 10) * std::sin(p / 30)),
                    sr(p / 6, p / 10);
            break;
        }
    }
    return v;
}

}  // namespace odeim

#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "odeim/types.hpp"

namespace odeim {

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// Dense eigendecomposition with right and left eigenvectors (rows of V^{-1}).
struct Eigensystem {
    Vector values;
    Matrix right;  // columns
    Matrix left;   // rows, left.row(k) * A = values[k] * left.row(k)
};

inline Eigensystem eigensystem(const Matrix& A) {
    Eigen::ComplexEigenSolver<Matrix> es(A, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) throw ConstructionError("eigendecomposition failed");
    Eigensystem r;
    r.values = es.eigenvalues();
    r.right = es.eigenvectors();
    r.left = r.right.inverse();
    return r;
}

// index of the eigenvalue of strictly largest real part, if unique
inline int argmax_real(const Vector& vals) {
    int k = 0;
    for (int i = 1; i < vals.size(); ++i)
        if (vals[i].real() > vals[k].real()) k = i;
    return k;
}

// phase convention: make the largest-modulus entry real positive
inline Vector phase_normalized(Vector v) {
    int j = 0;
    for (int i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[j])) j = i;
    if (std::abs(v[j]) > 0) v *= std::abs(v[j]) / v[j];
    return v;
}

// coefficient c minimizing |lhs - c*rhs|; throws unless the residual is small
inline Complex parallel_coefficient(const Vector& lhs, const Vector& rhs, double rel_tol,
                                    const char* what) {
    Complex c = rhs.dot(lhs) / rhs.squaredNorm();  // Eigen dot conjugates the left argument
    double res = (lhs - c * rhs).norm();
    if (res > rel_tol * std::max(lhs.norm(), 1e-300))
        throw ConstructionError(std::string(what) + ": vectors not parallel, residual " +
                                std::to_string(res / std::max(lhs.norm(), 1e-300)));
    return c;
}

}  // namespace odeim

#pragma once

/// Truncated root q(x,E) of the potential p(x,E) = x^{M hvee} - E and its
/// primitive, the action S(x,E). q has s+1 terms with s = floor((M+1)/(hvee M));
/// the first omitted term is O(x^{-1-delta}).

#include <cmath>
#include <vector>

#include "odeim/types.hpp"

namespace odeim {

struct QExpansion {
    double M = 0;
    int hvee = 0;
    Complex E = 0;
    int s = 0;
    std::vector<Complex> c;  // c[j-1] = binom(1/hvee, j) (-E)^j, j = 1..s
    double delta = 0;
    bool log_case = false;   // (M+1)/(hvee M) integral: last primitive term is a log
};

inline double generalized_binomial(double alpha, int j) {
    double r = 1.0;
    for (int t = 0; t < j; ++t) r *= (alpha - t) / (t + 1.0);
    return r;
}

inline QExpansion q_expansion(double M, int hvee, Complex E) {
    if (!(M > 0)) throw DomainError("q_expansion: M must be positive");
    QExpansion q;
    q.M = M;
    q.hvee = hvee;
    q.E = E;
    const double ratio = (M + 1.0) / (hvee * M);
    q.s = static_cast<int>(std::floor(ratio + 1e-12));
    q.log_case = std::abs(ratio - std::round(ratio)) < 1e-12;
    for (int j = 1; j <= q.s; ++j)
        q.c.push_back(generalized_binomial(1.0 / hvee, j) * std::pow(-E, j));
    q.delta = M * (hvee * (1.0 + q.s) - 1.0) - 1.0;
    return q;
}

// exponent of term j (j = 0 is the leading x^M)
inline double q_term_exponent(const QExpansion& q, int j) { return q.M * (1.0 - q.hvee * j); }

inline Complex q_value(const QExpansion& q, Complex x) {
    Complex v = std::pow(x, q.M);
    for (int j = 1; j <= q.s; ++j) v += q.c[j - 1] * std::pow(x, q_term_exponent(q, j));
    return v;
}

// termwise primitive with the principal log when the last exponent is -1
inline Complex action(const QExpansion& q, Complex x) {
    if (x.real() <= 0 && std::abs(x.imag()) < 1e-300)
        throw DomainError("action: x on the branch cut");
    Complex S = std::pow(x, q.M + 1.0) / (q.M + 1.0);
    for (int j = 1; j <= q.s; ++j) {
        const double e = q_term_exponent(q, j);
        if (std::abs(e + 1.0) < 1e-12)
            S += q.c[j - 1] * std::log(x);
        else
            S += q.c[j - 1] * std::pow(x, e + 1.0) / (e + 1.0);
    }
    return S;
}

inline Complex action(double M, int hvee, Complex E, Complex x) {
    return action(q_expansion(M, hvee, E), x);
}

}  // namespace odeim

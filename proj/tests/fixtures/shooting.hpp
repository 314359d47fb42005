#pragma once

// Test-only scalar oracle, independent of the library's solvers: fixed-step
// RK4 shooting for the radial problem
//     u'' = ( x^{2M} + l(l+1)/x^2 - E ) u,   u ~ x^{l+1} at 0, decaying at inf.
// Eigenvalues are located by a Wronskian mismatch between an outward and an
// inward sweep. For M = 1 the exact spectrum is E_n = 4n + 2l + 3.

#include <cmath>
#include <functional>
#include <vector>

namespace shooting {

struct Settings {
    double M = 1.0;
    double l = 0.0;
    double x_inner = 1e-3;
    double x_mid = 1.0;
    double x_outer = 12.0;
    double h = 5e-5;
};

// one RK4 sweep of (u, u') with u'' = P(x) u
inline void rk4_sweep(const std::function<double(double)>& P, double x0, double x1, double h_mag,
                      double& u, double& up) {
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(x1 - x0) / h_mag)));
    const double h = (x1 - x0) / steps;
    double x = x0;
    auto f = [&](double xx, double uu, double vv, double& du, double& dv) {
        du = vv;
        dv = P(xx) * uu;
    };
    for (int s = 0; s < steps; ++s) {
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        f(x, u, up, k1u, k1v);
        f(x + h / 2, u + h / 2 * k1u, up + h / 2 * k1v, k2u, k2v);
        f(x + h / 2, u + h / 2 * k2u, up + h / 2 * k2v, k3u, k3v);
        f(x + h, u + h * k3u, up + h * k3v, k4u, k4v);
        u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
        up += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        x += h;
        // renormalize to dodge overflow; only the direction matters
        double m = std::max(std::abs(u), std::abs(up));
        if (m > 1e200) {
            u /= m;
            up /= m;
        }
    }
}

inline double mismatch(const Settings& st, double E) {
    auto P = [&](double x) {
        return std::pow(x, 2.0 * st.M) + st.l * (st.l + 1.0) / (x * x) - E;
    };
    // outward: u = x^{l+1} (1 - E/(4l+6) x^2 + ...)
    double x0 = st.x_inner;
    double a = -E / (4.0 * st.l + 6.0);
    double u = std::pow(x0, st.l + 1.0) * (1.0 + a * x0 * x0);
    double up = (st.l + 1.0) * std::pow(x0, st.l) + a * (st.l + 3.0) * std::pow(x0, st.l + 2.0);
    rk4_sweep(P, x0, st.x_mid, st.h, u, up);
    // inward: quasi-WKB decaying start
    double v = 1.0, vp = -std::sqrt(P(st.x_outer));
    rk4_sweep(P, st.x_outer, st.x_mid, 2.0 * st.h, v, vp);
    double w = u * vp - up * v;
    return w / std::sqrt((u * u + up * up) * (v * v + vp * vp));
}

inline std::vector<double> eigenvalues(const Settings& st, int count, double E_lo = 0.5,
                                       double E_hi = 60.0, double scan_step = 0.2) {
    std::vector<double> out;
    double prevE = E_lo, prevF = mismatch(st, E_lo);
    for (double E = E_lo + scan_step; E <= E_hi && static_cast<int>(out.size()) < count;
         E += scan_step) {
        double f = mismatch(st, E);
        if (prevF * f < 0) {
            double a = prevE, b = E, fa = prevF;
            for (int it = 0; it < 80; ++it) {
                double m = 0.5 * (a + b);
                double fm = mismatch(st, m);
                if (fa * fm <= 0) b = m;
                else {
                    a = m;
                    fa = fm;
                }
                if (b - a < 1e-10) break;
            }
            out.push_back(0.5 * (a + b));
        }
        prevE = E;
        prevF = f;
    }
    return out;
}

}  // namespace shooting

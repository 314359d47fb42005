#pragma once

/// Adaptive Dormand-Prince 5(4) for linear ODE systems along straight complex
/// segments, with step clipping at requested sample points. Error control is
/// relative with a per-vector floor so traces spanning many decades stay
/// accurate in the direction that matters.

#include <algorithm>
#include <functional>
#include <vector>

#include "odeim/types.hpp"

namespace odeim {

struct OdeOptions {
    double tol = 1e-10;
    double h_init_frac = 1e-3;   // first step as a fraction of the segment
    double h_min_frac = 1e-14;   // below this the integration is declared stuck
    int max_steps = 2000000;
};

namespace dp5 {
// Dormand-Prince tableau
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp5

// integrates y' = A(z) y from z_from to z_to along the straight segment,
// calling `on_sample` at each requested point (clipped step endpoints).
// `samples` must be sorted by position along the segment.
inline Vector integrate_linear(const std::function<Matrix(Complex)>& A, Complex z_from,
                               Complex z_to, Vector y, const std::vector<Complex>& samples,
                               const std::function<void(Complex, const Vector&)>& on_sample,
                               const OdeOptions& opt = {}) {
    const Complex dir = z_to - z_from;
    const double len = std::abs(dir);
    if (len == 0.0) return y;
    auto rhs = [&](double t, const Vector& v) -> Vector { return dir * (A(z_from + t * dir) * v); };

    // sample positions as parameters t in (0, 1]; endpoint always integrated
    std::vector<double> stops;
    for (Complex s : samples) {
        double t = ((s - z_from) / dir).real();
        if (t > 1e-15 && t < 1.0 + 1e-12) stops.push_back(std::min(t, 1.0));
    }
    stops.push_back(1.0);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                stops.end());

    double t = 0.0;
    double h = opt.h_init_frac;  // step size the controller owns; clipping is transient
    size_t stop_at = 0;
    Vector k1 = rhs(t, y);
    long steps = 0;
    while (stop_at < stops.size()) {
        const double target = stops[stop_at];
        double h_try = h;
        bool clipped = false;
        if (t + h_try >= target) {
            h_try = target - t;
            clipped = true;
        }
        using namespace dp5;
        const double hs = h_try;
        Vector k2 = rhs(t + c2 * hs, y + hs * (a21 * k1));
        Vector k3 = rhs(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        Vector k4 = rhs(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        Vector k5 = rhs(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Vector k6 = rhs(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Vector ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Vector k7 = rhs(t + hs, ynew);
        Vector errv = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double floor_scale = std::max(y.cwiseAbs().maxCoeff(), ynew.cwiseAbs().maxCoeff());
        double err = 0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double sc = std::max({std::abs(y[i]), std::abs(ynew[i]), 1e-4 * floor_scale, 1e-290});
            err = std::max(err, std::abs(errv[i]) / sc);
        }
        err /= opt.tol;
        const bool accept = err <= 1.0;
        if (accept) {
            t = clipped ? target : t + hs;
            y = std::move(ynew);
            k1 = std::move(k7);  // FSAL
            if (clipped) {
                if (on_sample) on_sample(z_from + target * dir, y);
                ++stop_at;
            }
        }
        const double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
        if (!accept || !clipped) h = std::min(hs * fac, 1.0);
        if (h < opt.h_min_frac)
            throw IntegrationError("integrate_linear: step underflow (stiffness)", z_from + t * dir);
        if (++steps > opt.max_steps)
            throw IntegrationError("integrate_linear: step budget exhausted", z_from + t * dir);
    }
    return y;
}

}  // namespace odeim

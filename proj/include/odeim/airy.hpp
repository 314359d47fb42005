#pragma once

/// Contour-integral solutions for the linear potential, their steepest
/// descent asymptotics, and rotated siblings.
///
/// A case (matrix size n, algebra A_{n-1}):
///   Psi_j(x) = (1/2 pi i) Int s^{j-1} e^{-x s + s^{n+1}/(n+1)} ds
/// along a V through the origin between the rays arg s = +-pi/(n+1).
/// D case (size 2n): the integrand components carry s^{-1/2}, so the path
/// keeps a unit arc around the origin; rays at arg s = +-pi/(2n-1).
/// Gauss-Legendre panels with doubling until the value is stable.

#include <array>
#include <functional>
#include <vector>

#include "odeim/cartan.hpp"

namespace odeim {

namespace quad {

// nodes/weights of the 32-point Gauss-Legendre rule on [-1, 1]
inline const std::vector<std::pair<double, double>>& gauss32() {
    static const std::vector<std::pair<double, double>> table = [] {
        const int n = 32;
        std::vector<std::pair<double, double>> out(n);
        for (int i = 0; i < n; ++i) {
            // Newton from the Chebyshev estimate
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double p0 = 0, p1 = 0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = 0.0;
                for (int k = 0; k < n; ++k) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
                }
                double dp = n * (x * p0 - p1) / (x * x - 1.0);
                double dx = p0 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            p1 = 0.0;
            p0 = 1.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            double dp = n * (x * p0 - p1) / (x * x - 1.0);
            out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return out;
    }();
    return table;
}

// integral of f over the parametrized curve z(t), t in [0,1], with panel doubling
inline Complex adaptive_panels(const std::function<Complex(double)>& z,
                               const std::function<Complex(double)>& dz,
                               const std::function<Complex(Complex)>& f, double abs_tol) {
    Complex prev = 0;
    for (int panels = 8; panels <= 4096; panels *= 2) {
        Complex acc = 0;
        for (int p = 0; p < panels; ++p) {
            const double a = double(p) / panels, b = double(p + 1) / panels;
            for (auto [xi, w] : gauss32()) {
                const double t = 0.5 * (a + b) + 0.5 * (b - a) * xi;
                acc += 0.5 * (b - a) * w * f(z(t)) * dz(t);
            }
        }
        if (panels > 8 && std::abs(acc - prev) < abs_tol * std::max(1.0, std::abs(acc)))
            return acc;
        prev = acc;
    }
    throw AccuracyError("contour quadrature did not stabilize");
}

}  // namespace quad

struct ContourSpec {
    Family family;
    int n = 0;          // matrix size parameter of the integral representation
    double R = 0;       // truncation radius
    double theta = 0;   // ray half-angle
    Complex rotation = 1.0;
    double arc_radius = 0;  // 0 = V through the origin (A case)
};

namespace detail_airy {

inline double pick_radius(int power, double xmag, double target = 40.0) {
    // smallest R with R^power/power - xmag R >= target
    double R = 1.0;
    while (std::pow(R, power) / power - xmag * R < target && R < 1e4) R *= 1.1;
    return R;
}

}  // namespace detail_airy

inline ContourSpec make_contour_A(int n, Complex x, int k_rotation = 0) {
    if (n < 2) throw DomainError("airy_A: n >= 2");
    ContourSpec c;
    c.family = Family::A;
    c.n = n;
    c.theta = kPi / (n + 1);
    c.R = detail_airy::pick_radius(n + 1, std::abs(x));
    c.rotation = std::exp(Complex(0, 2.0 * kPi * k_rotation / (n + 1.0)));
    return c;
}

inline ContourSpec make_contour_D(int n, Complex x, int k_rotation = 0) {
    if (n < 3) throw DomainError("airy_D: n >= 3");
    ContourSpec c;
    c.family = Family::D;
    c.n = n;
    c.theta = kPi / (2 * n - 1);
    c.R = detail_airy::pick_radius(2 * n - 1, std::abs(x));
    c.rotation = std::exp(Complex(0, kPi * k_rotation / (2 * n - 1.0)));
    c.arc_radius = 1.0;
    if (c.theta + std::abs(std::arg(c.rotation)) >= kPi)
        throw DomainError("airy_D: rotated contour would cross the branch cut");
    return c;
}

// integral of f over the contour: incoming ray, optional arc, outgoing ray
inline Complex contour_integral(const ContourSpec& c, const std::function<Complex(Complex)>& f,
                                double abs_tol = 1e-13) {
    const Complex in_dir = c.rotation * std::exp(Complex(0, -c.theta));
    const Complex out_dir = c.rotation * std::exp(Complex(0, +c.theta));
    const double r0 = c.arc_radius;
    Complex total = 0;
    // ray in: from R*in_dir to r0*in_dir
    total += quad::adaptive_panels(
        [&](double t) { return (c.R + (r0 - c.R) * t) * in_dir; },
        [&](double) { return (r0 - c.R) * in_dir; }, f, abs_tol);
    if (r0 > 0) {
        const double a0 = std::arg(in_dir), a1 = a0 + 2.0 * c.theta;
        total += quad::adaptive_panels(
            [&](double t) { return r0 * std::exp(Complex(0, a0 + (a1 - a0) * t)); },
            [&](double t) { return r0 * Complex(0, a1 - a0) * std::exp(Complex(0, a0 + (a1 - a0) * t)); },
            f, abs_tol);
    }
    total += quad::adaptive_panels(
        [&](double t) { return (r0 + (c.R - r0) * t) * out_dir; },
        [&](double) { return (c.R - r0) * out_dir; }, f, abs_tol);
    return total;
}

// integrand components and their s-derivatives (kappa = 1)
inline Complex airy_A_phi(int n, int j, Complex s) {
    return std::pow(s, j - 1) * std::exp(std::pow(s, n + 1) / double(n + 1));
}

inline Complex airy_D_phi(int n, int j, Complex s) {
    const Complex phi1 = std::pow(s, -0.5) * std::exp(std::pow(s, 2 * n - 1) / double(2 * n - 1));
    if (j == 1) return phi1;
    if (j <= n - 1) return std::pow(s, j - 1) * phi1;
    if (j == n) return 0.5 * std::pow(s, n - 1) * phi1;
    if (j < 2 * n) return std::pow(s, j - 2) * phi1;
    return (0.5 * std::pow(s, 2 * n - 2) + 0.25 / s) * phi1;  // j = 2n
}

inline Complex airy_D_phi_deriv(int n, int j, Complex s) {
    const Complex phi1 = airy_D_phi(n, 1, s);
    const Complex dlog1 = -0.5 / s + std::pow(s, 2 * n - 2);  // phi1'/phi1
    auto of = [&](Complex g, Complex gp) { return (gp + g * dlog1) * phi1; };
    if (j == 1) return of(1.0, 0.0);
    if (j <= n - 1) return of(std::pow(s, j - 1), double(j - 1) * std::pow(s, j - 2));
    if (j == n) return of(0.5 * std::pow(s, n - 1), 0.5 * (n - 1.0) * std::pow(s, n - 2));
    if (j < 2 * n) return of(std::pow(s, j - 2), double(j - 2) * std::pow(s, j - 3));
    return of(0.5 * std::pow(s, 2 * n - 2) + 0.25 / s,
              (n - 1.0) * std::pow(s, 2 * n - 3) - 0.25 / (s * s));
}

inline Complex airy_A(int n, int j, Complex x) {
    if (j < 1 || j > n) throw DomainError("airy_A: component out of range");
    ContourSpec c = make_contour_A(n, x);
    Complex v = contour_integral(
        c, [&](Complex s) { return airy_A_phi(n, j, s) * std::exp(-x * s); });
    return v / (2.0 * kPi * kI);
}

inline Complex airy_D(int n, int j, Complex x) {
    if (j < 1 || j > 2 * n) throw DomainError("airy_D: component out of range");
    ContourSpec c = make_contour_D(n, x);
    return contour_integral(c, [&](Complex s) { return airy_D_phi(n, j, s) * std::exp(-x * s); });
}

inline Complex airy_asymptote_A(int n, int j, double x) {
    if (!(x > 0)) throw DomainError("airy_asymptote_A: x > 0");
    return std::sqrt(1.0 / (2.0 * kPi * n)) * std::pow(x, (2.0 * j - 1.0 - n) / (2.0 * n)) *
           std::exp(-(double(n) / (n + 1.0)) * std::pow(x, (n + 1.0) / n));
}

inline Vector rotated_airy(Family family, int n, int k, Complex x) {
    if (family == Family::A) {
        ContourSpec c = make_contour_A(n, x, k);
        Vector out(n);
        for (int j = 1; j <= n; ++j)
            out[j - 1] = contour_integral(
                             c, [&](Complex s) { return airy_A_phi(n, j, s) * std::exp(-x * s); }) /
                         (2.0 * kPi * kI);
        return out;
    }
    ContourSpec c = make_contour_D(n, x, k);
    Vector out(2 * n);
    for (int j = 1; j <= 2 * n; ++j)
        out[j - 1] =
            contour_integral(c, [&](Complex s) { return airy_D_phi(n, j, s) * std::exp(-x * s); });
    return out;
}

}  // namespace odeim

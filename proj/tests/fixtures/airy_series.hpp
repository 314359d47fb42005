#pragma once

// Test-only oracle: Maclaurin series of the classical Airy function,
//   Ai(x) = c1 f(x) - c2 g(x),
//   f = sum x^{3k} prod(3j-2)/ (3k)!,  g = sum x^{3k+1} prod(3j-1)/(3k+1)!
// accurate near the origin where the two series do not cancel badly.

#include <cmath>

namespace airy_series {

inline double ai(double x, int terms = 40) {
    const double c1 = 0.3550280538878172392600631860041831763980;  // 3^{-2/3}/Gamma(2/3)
    const double c2 = 0.2588194037928067984051835601892039634793;  // 3^{-1/3}/Gamma(1/3)
    double f = 1.0, g = x;
    double tf = 1.0, tg = x;
    for (int k = 1; k <= terms; ++k) {
        tf *= x * x * x * (3.0 * k - 2.0) / ((3.0 * k) * (3.0 * k - 1.0) * (3.0 * k - 2.0));
        tg *= x * x * x * (3.0 * k - 1.0) / ((3.0 * k + 1.0) * (3.0 * k) * (3.0 * k - 1.0));
        f += tf;
        g += tg;
    }
    return c1 * f - c2 * g;
}

inline double ai0() { return 0.3550280538878172392600631860041831763980; }

}  // namespace airy_series

// Rank-one sanity run: the normalized product of the two rotated subdominant
// solutions is identically one, for any E. Prints the deviation on a small
// grid.

#include <cstdio>

#include "odeim/psi_system.hpp"

using namespace odeim;

int main() {
    auto cd = cartan_data({Family::A, 1});
    auto fs = build_fundamental_system(cd);
    ConnectionParams p;
    p.cartan = cd;
    p.M = 1.0;
    p.ell = Vector::Zero(1);
    p.tol = 1e-10;
    for (double E : {0.0, 1.0, -3.0}) {
        p.E = E;
        auto rep = psi_system_residual(fs, 1, p, default_x_grid(0.3, 1.5, 5));
        std::printf("E = %5.1f   max |W - 1| = %.3e\n", E, rep.max_residual);
    }
    return 0;
}

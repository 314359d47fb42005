// Prints the Perron-Frobenius mass vector for every simply-laced algebra up
// to rank 8, next to the closed-form values.

#include <cstdio>

#include "odeim/cartan.hpp"

using namespace odeim;

int main() {
    std::vector<AlgebraKind> kinds;
    for (int n = 1; n <= 8; ++n) kinds.push_back({Family::A, n});
    for (int n = 3; n <= 8; ++n) kinds.push_back({Family::D, n});
    for (int n : {6, 7, 8}) kinds.push_back({Family::E, n});

    for (auto kind : kinds) {
        auto cd = cartan_data(kind);
        auto pf = pf_vector(cd);
        auto closed = pf_closed_form(cd);
        std::printf("%-3s (hvee = %2d):", kind.name().c_str(), cd.hvee);
        for (int i = 0; i < cd.rank(); ++i) std::printf(" %.6f", pf[i]);
        std::printf("   max dev %.1e\n", (pf - closed).lpNorm<Eigen::Infinity>());
    }
    return 0;
}

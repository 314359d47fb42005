#pragma once

/// Numerical check of the quadratic solution identities
///   m_i( Psi^(i)_{-1/2} ^ Psi^(i)_{+1/2} ) = (x)_j Psi^(j)^{(x)B_ij}
/// on a grid of positive x.

#include <vector>

#include "odeim/connection.hpp"
#include "odeim/fundsys.hpp"

namespace odeim {

struct PsiSystemReport {
    int node = 0;
    Complex E = 0;
    std::vector<double> x_grid;
    std::vector<double> residuals;  // relative, per grid point
    double max_residual = 0;
};

inline std::vector<double> default_x_grid(double lo = 0.2, double hi = 2.0, int count = 16) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo * std::pow(hi / lo, count == 1 ? 0.0 : double(i) / (count - 1));
    return g;
}

// scaled solution trace for node j (c = 1 normalization folded in)
inline SolutionTrace node_trace(const FundamentalSystem& fs, int j, const ConnectionParams& p,
                                Complex k, const std::vector<double>& grid) {
    SolutionTrace tr = psi_k(fs(j).V, p, k, grid);
    const Complex s = fs.trace_scale(j);
    for (auto& [x, v] : tr.samples) v *= s;
    return tr;
}

inline PsiSystemReport psi_system_residual(const FundamentalSystem& fs, int i,
                                           const ConnectionParams& p,
                                           const std::vector<double>& x_grid) {
    const int n = fs.cartan.rank();
    if (i < 1 || i > n) throw DomainError("psi_system_residual: node out of range");
    std::vector<double> grid = x_grid;
    std::sort(grid.begin(), grid.end(), std::greater<double>());

    SolutionTrace minus = node_trace(fs, i, p, -0.5, grid);
    SolutionTrace plus = node_trace(fs, i, p, +0.5, grid);
    std::vector<int> nbr;
    for (int j = 1; j <= n; ++j)
        if (fs.cartan.B(i - 1, j - 1) == 1) nbr.push_back(j);
    std::vector<SolutionTrace> rhs_traces;
    for (int j : nbr) rhs_traces.push_back(node_trace(fs, j, p, 0.0, grid));

    PsiSystemReport rep;
    rep.node = i;
    rep.E = p.E;
    for (size_t s = 0; s < grid.size(); ++s) {
        Vector lhs = fs(i).m.apply(wedge_embed(minus.at(s), plus.at(s)));
        Vector rhs;
        if (nbr.empty()) {
            rhs = Vector::Ones(1);
        } else {
            std::vector<Vector> parts;
            for (auto& t : rhs_traces) parts.push_back(t.at(s));
            rhs = tensor_embed(parts);
        }
        double r = (lhs - rhs).norm() / rhs.norm();
        rep.x_grid.push_back(grid[s]);
        rep.residuals.push_back(r);
        rep.max_residual = std::max(rep.max_residual, r);
    }
    return rep;
}

}  // namespace odeim

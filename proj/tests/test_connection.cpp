#include <catch2/catch_amalgamated.hpp>

#include "odeim/connection.hpp"
#include "fixtures/shooting.hpp"

using namespace odeim;
using Catch::Approx;

namespace {
ConnectionParams make_params(AlgebraKind kind, double M, Complex E, double tol = 1e-10) {
    ConnectionParams p;
    p.cartan = cartan_data(kind);
    p.M = M;
    p.E = E;
    p.ell = Vector::Zero(kind.rank);
    p.tol = tol;
    return p;
}
}  // namespace

TEST_CASE("zero initial vector stays zero") {
    auto p = make_params({Family::A, 1}, 1.0, 0.5);
    auto rep = rep_A_standard(1, 0.0);
    auto tr = integrate(rep, p, Complex(5.0), Complex(1.0), Vector::Zero(2), {Complex(3.0)});
    for (auto& [x, v] : tr.samples) REQUIRE(v.norm() == 0.0);
}

TEST_CASE("A1 component equals the scalar second-order oracle") {
    // eliminating one component gives psi1'' = (x^{2M} - E) psi1 at ell = 0;
    // integrate both representations from the same data and compare
    auto p = make_params({Family::A, 1}, 1.0, 1.3, 1e-12);
    auto rep = rep_A_standard(1, 0.0);
    auto tr = subdominant_solution(rep, p, {0.5, 1.0, 2.0, 4.0});
    REQUIRE(tr.samples.size() == 4);

    // scalar RK4 from the outermost sample inward
    double x_hi = tr.samples.front().first.real();
    REQUIRE(x_hi == Approx(4.0));
    double u = tr.samples.front().second[0].real();
    double up = -tr.samples.front().second[1].real();  // psi1' = -psi2
    auto P = [&](double x) { return x * x - 1.3; };
    shooting::rk4_sweep(P, x_hi, 0.5, 2e-6, u, up);
    double got = tr.samples.back().second[0].real();
    REQUIRE(got == Approx(u).epsilon(1e-8));
}

TEST_CASE("solution is real for real data") {
    auto p = make_params({Family::A, 1}, 1.0, -2.0);
    auto rep = rep_A_standard(1, 0.0);
    auto tr = subdominant_solution(rep, p, {0.5, 1.5});
    for (auto& [x, v] : tr.samples) {
        REQUIRE(v.imag().cwiseAbs().maxCoeff() < 1e-12 * v.norm());
        REQUIRE(v.norm() > 0);
    }
}

TEST_CASE("tolerance contract: halving tol moves the endpoint less than 10 tol") {
    auto rep = rep_A_standard(2, 0.0);
    auto p1 = make_params({Family::A, 2}, 1.0, 0.8, 1e-8);
    auto p2 = p1;
    p2.tol = 5e-9;
    Vector a = subdominant_solution(rep, p1, {0.4}).samples.back().second;
    Vector b = subdominant_solution(rep, p2, {0.4}).samples.back().second;
    REQUIRE((a - b).norm() / b.norm() < 10.0 * p1.tol);
}

TEST_CASE("matching stability: doubling x_match") {
    auto rep = rep_A_standard(2, 0.0);
    auto p = make_params({Family::A, 2}, 1.0, 1.0, 1e-10);
    auto base = subdominant_solution(rep, p, {0.3, 1.0, 2.0});
    auto p2 = p;
    p2.x_match = 2.0 * base.x_match;
    auto far = subdominant_solution(rep, p2, {0.3, 1.0, 2.0});
    for (size_t i = 0; i < base.samples.size(); ++i) {
        double rel = (base.at(i) - far.at(i)).norm() / far.at(i).norm();
        REQUIRE(rel < 100.0 * p.tol);
    }
}

TEST_CASE("ODE residual of produced traces") {
    auto rep = rep_A_standard(2, 0.0);
    auto p = make_params({Family::A, 2}, 1.0, Complex(0.3, 0.2), 1e-9);
    auto tr = subdominant_solution(rep, p, {0.5, 0.9, 1.7});
    REQUIRE(trace_residual(rep, p, tr) < 10.0 * p.tol);
    auto trk = psi_k(rep, p, 0.5, {0.5, 0.9, 1.7});
    REQUIRE(trace_residual(rep, p, trk) < 10.0 * p.tol);
}

TEST_CASE("asymptotic ratio at the matching radius") {
    // e^{lambda S} q^{h} Psi(x) approaches psi entrywise; the leading-order
    // deviation is O(E/x), so the 1% window needs |E| << x
    auto rep = rep_A_standard(2, 0.0);
    auto p = make_params({Family::A, 2}, 1.0, 0.2);
    auto sp = maximal_eigenpair(rep);
    REQUIRE(sp.maximal);
    auto tr = subdominant_solution(rep, p, {12.0});
    auto q = q_expansion(p.M, p.cartan.hvee, p.E);
    Complex x = tr.samples.back().first;
    Vector scaled = std::exp(sp.maximal->lambda * action(q, x)) *
                    (exp_h(rep, std::log(q_value(q, x))) * tr.samples.back().second);
    for (int i = 0; i < 3; ++i)
        REQUIRE(std::abs(scaled[i] - sp.maximal->psi[i]) < 0.01 * std::abs(sp.maximal->psi[i]));
}

TEST_CASE("k = 0 rotation is the subdominant solution") {
    auto rep = rep_A_standard(2, 0.0);
    auto p = make_params({Family::A, 2}, 1.0, 0.4);
    auto a = subdominant_solution(rep, p, {0.7, 1.3});
    auto b = psi_k(rep, p, 0.0, {0.7, 1.3});
    for (size_t i = 0; i < a.samples.size(); ++i)
        REQUIRE((a.at(i) - b.at(i)).norm() < 1e-12 * a.at(i).norm() + 1e-300);
}

TEST_CASE("rotation equals direct integration of the twisted connection (A1)") {
    const Complex k = 0.25;
    auto p = make_params({Family::A, 1}, 1.0, 0.6, 1e-11);
    auto rep = rep_A_standard(1, 0.0);
    Phases ph = p.phases();
    std::vector<double> radii{0.6, 1.0, 1.9};
    auto rot = psi_k(rep, p, k, radii);

    // direct: V_k with eigenpair (gamma^k lambda, gamma^{-k h} psi)
    auto repk = twisted(rep, k);
    auto sp = maximal_eigenpair(rep);
    REQUIRE(sp.maximal);
    Complex lam_k = ph.gamma_pow(k) * sp.maximal->lambda;
    Vector psi_k_vec = gamma_h_twist(rep, ph.gamma, -k) * sp.maximal->psi;
    Eigensystem es = eigensystem(lambda_matrix(repk));
    int best = 0;
    for (int i = 1; i < es.values.size(); ++i)
        if (std::abs(es.values[i] - lam_k) < std::abs(es.values[best] - lam_k)) best = i;
    REQUIRE(std::abs(es.values[best] - lam_k) < 1e-10);
    Complex fix = parallel_coefficient(psi_k_vec, es.right.col(best), 1e-8, "rotated eigvec");
    Vector left = es.left.row(best).transpose() / fix;
    Vector dinv = Vector::Zero(es.values.size());
    for (int i = 0; i < es.values.size(); ++i)
        if (i != best) dinv[i] = 1.0 / (es.values[i] - lam_k);
    Matrix pinv = es.right * dinv.asDiagonal() * es.left;

    auto plan = detail::make_match_plan(repk, p, p.E, lam_k, psi_k_vec, left, pinv, 1.9);
    const QExpansion q = plan.q;
    Complex x0 = plan.x_match;
    Vector init = std::exp(-lam_k * action(q, x0)) *
                  (exp_h(repk, -std::log(q_value(q, x0))) * plan.series.eval(x0));
    auto A = [&](Complex z) { return connection_matrix(repk, p, z, p.E); };
    OdeOptions opt;
    opt.tol = p.tol;
    std::vector<Complex> stops;
    for (double r : {1.9, 1.0, 0.6}) stops.push_back(r);
    std::vector<Vector> direct;
    integrate_linear(A, x0, stops.back(), init, stops,
                     [&](Complex, const Vector& v) { direct.push_back(v); }, opt);
    REQUIRE(direct.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        INFO("sample " << i);
        REQUIRE((rot.at(i) - direct[i]).norm() / direct[i].norm() < 1e-8);
    }
}

TEST_CASE("smoothness proxy in E") {
    auto rep = rep_A_standard(2, 0.0);
    auto p = make_params({Family::A, 2}, 1.0, 0.9, 1e-11);
    auto val = [&](Complex E) {
        auto pp = p;
        pp.E = E;
        return subdominant_solution(rep, pp, {0.8}).samples.back().second;
    };
    const double d1 = 1e-3, d2 = 5e-4;
    Vector g1 = (val(p.E + d1) - val(p.E - d1)) / (2 * d1);
    Vector g2 = (val(p.E + d2) - val(p.E - d2)) / (2 * d2);
    REQUIRE((g1 - g2).norm() < 1e-3 * g2.norm());  // second-order consistency
}

TEST_CASE("sector guard on psi_k") {
    auto rep = rep_A_standard(1, 0.0);
    auto p = make_params({Family::A, 1}, 1.0, 0.0);
    REQUIRE_THROWS_AS(psi_k(rep, p, 3.0, {1.0}), DomainError);
}

TEST_CASE("shooting fixture sanity: exact oscillator ladder") {
    shooting::Settings st;
    st.M = 1.0;
    st.l = 0.0;
    auto ev = shooting::eigenvalues(st, 3, 0.5, 14.0);
    REQUIRE(ev.size() == 3);
    REQUIRE(ev[0] == Approx(3.0).margin(2e-7));
    REQUIRE(ev[1] == Approx(7.0).margin(2e-7));
    REQUIRE(ev[2] == Approx(11.0).margin(2e-7));
}

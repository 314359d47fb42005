#include <catch2/catch_amalgamated.hpp>

#include "odeim/cartan.hpp"

using namespace odeim;

namespace {
std::vector<AlgebraKind> all_kinds_up_to_8() {
    std::vector<AlgebraKind> v;
    for (int n = 1; n <= 8; ++n) v.push_back({Family::A, n});
    for (int n = 3; n <= 8; ++n) v.push_back({Family::D, n});
    for (int n : {6, 7, 8}) v.push_back({Family::E, n});
    return v;
}
}  // namespace

TEST_CASE("cartan matrices: basic shapes") {
    auto a2 = cartan_data({Family::A, 2});
    REQUIRE(a2.hvee == 3);
    REQUIRE(a2.C(0, 0) == 2);
    REQUIRE(a2.C(0, 1) == -1);
    REQUIRE(a2.C(1, 0) == -1);

    auto d4 = cartan_data({Family::D, 4});
    // the fork node n-2 = 2 touches nodes 1, 3, 4
    REQUIRE(d4.B.row(1).sum() == 3);
    REQUIRE(d4.B(1, 0) == 1);
    REQUIRE(d4.B(1, 2) == 1);
    REQUIRE(d4.B(1, 3) == 1);
    REQUIRE(d4.hvee == 6);

    REQUIRE(cartan_data({Family::E, 6}).hvee == 12);
    REQUIRE(cartan_data({Family::E, 7}).hvee == 18);
    REQUIRE(cartan_data({Family::E, 8}).hvee == 30);
    REQUIRE(cartan_data({Family::A, 5}).hvee == 6);
    REQUIRE(cartan_data({Family::D, 6}).hvee == 10);
}

TEST_CASE("invalid ranks rejected") {
    REQUIRE_THROWS_AS(cartan_data({Family::A, 0}), DomainError);
    REQUIRE_THROWS_AS(cartan_data({Family::D, 2}), DomainError);
    REQUIRE_THROWS_AS(cartan_data({Family::E, 5}), DomainError);
    REQUIRE_THROWS_AS(cartan_data({Family::E, 9}), DomainError);
    REQUIRE_THROWS_AS(parse_algebra("Q3"), DomainError);
}

TEST_CASE("incidence structure and parity") {
    for (auto kind : all_kinds_up_to_8()) {
        auto cd = cartan_data(kind);
        const int n = cd.rank();
        REQUIRE(cd.B == cd.B.transpose().eval());
        for (int i = 0; i < n; ++i) {
            REQUIRE(cd.B(i, i) == 0);
            for (int j = 0; j < n; ++j) {
                REQUIRE((cd.B(i, j) == 0 || cd.B(i, j) == 1));
                REQUIRE(cd.B(i, j) == 2 * (i == j) - cd.C(i, j));
                if (cd.B(i, j) == 1) REQUIRE(cd.parity[i] != cd.parity[j]);  // proper 2-coloring
            }
        }
    }
}

TEST_CASE("A-chain parity unrolls to (i-1) mod 2") {
    auto cd = cartan_data({Family::A, 7});
    for (int i = 1; i <= 7; ++i) REQUIRE(cd.parity[i - 1] == (i - 1) % 2);
}

TEST_CASE("Perron-Frobenius vector: eigen equation and closed forms") {
    for (auto kind : all_kinds_up_to_8()) {
        auto cd = cartan_data(kind);
        INFO(kind.name());
        RealVector v = pf_vector(cd);
        REQUIRE(v[0] == 1.0);
        REQUIRE(v.minCoeff() > 0.0);
        Eigen::VectorXd lhs = cd.B.cast<double>() * v;
        Eigen::VectorXd rhs = 2.0 * std::cos(kPi / cd.hvee) * v;
        REQUIRE((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-13);
        RealVector closed = pf_closed_form(cd);
        REQUIRE((v - closed).lpNorm<Eigen::Infinity>() < 1e-13);
    }
}

TEST_CASE("A3 masses (1, sqrt 2, 1)") {
    RealVector v = pf_vector(cartan_data({Family::A, 3}));
    REQUIRE(v[0] == Catch::Approx(1.0));
    REQUIRE(v[1] == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(v[2] == Catch::Approx(1.0).epsilon(1e-14));
    RealVector v1 = pf_vector(cartan_data({Family::A, 1}));
    REQUIRE(v1.size() == 1);
    REQUIRE(v1[0] == 1.0);
}

TEST_CASE("E6 node 3 mass is sin(pi/4)/sin(pi/12)") {
    RealVector v = pf_vector(cartan_data({Family::E, 6}));
    REQUIRE(v[2] == Catch::Approx(std::sin(kPi / 4) / std::sin(kPi / 12)).epsilon(1e-14));
}

TEST_CASE("phase triple") {
    auto cd = cartan_data({Family::A, 1});
    Phases p = phases(cd, 1.0);
    REQUIRE(std::abs(p.gamma - Complex(-1.0, 0.0)) < 1e-15);
    REQUIRE(std::abs(p.omega - Complex(0.0, 1.0)) < 1e-15);
    REQUIRE(std::abs(p.Omega - Complex(-1.0, 0.0)) < 1e-15);

    auto a2 = cartan_data({Family::A, 2});
    for (double M : {0.7, 1.0, 2.5}) {
        Phases q = phases(a2, M);
        REQUIRE(std::abs(q.gamma) == Catch::Approx(1.0));
        REQUIRE(std::abs(q.omega) == Catch::Approx(1.0));
        REQUIRE(std::abs(q.Omega) == Catch::Approx(1.0));
        REQUIRE(std::abs(std::pow(q.omega, M + 1.0) - q.gamma) < 1e-14);  // omega^{M+1} = gamma
    }
    Phases r = phases(a2, 1.0);
    REQUIRE(std::abs(r.omega - std::exp(Complex(0, kPi / 3))) < 1e-15);
    REQUIRE(std::abs(r.Omega - std::pow(r.omega, 3)) < 1e-15);
    REQUIRE_THROWS_AS(phases(a2, -1.0), DomainError);
}

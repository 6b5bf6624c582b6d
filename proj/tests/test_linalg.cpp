#include <catch_amalgamated.hpp>

#include <cmath>

#include "fintime/laws.hpp"
#include "fintime/linalg.hpp"
#include "helpers.hpp"

using namespace fintime;
using Catch::Matchers::WithinAbs;

TEST_CASE("companion_from_gains builds the closed-loop companion matrix") {
    SECTION("gains (1,2)") {
        const auto a = companion_from_gains(GainVector{1.0, 2.0});
        REQUIRE(a.dim() == 2);
        CHECK(a(0, 0) == 0.0);
        CHECK(a(0, 1) == 1.0);
        CHECK(a(1, 0) == -1.0);
        CHECK(a(1, 1) == -2.0);
    }
    SECTION("scalar case (5)") {
        const auto a = companion_from_gains(GainVector{5.0});
        REQUIRE(a.dim() == 1);
        CHECK(a(0, 0) == -5.0);
    }
    SECTION("gains (1,3,3)") {
        const auto a = companion_from_gains(GainVector{1.0, 3.0, 3.0});
        REQUIRE(a.dim() == 3);
        CHECK(a(0, 1) == 1.0);
        CHECK(a(1, 2) == 1.0);
        CHECK(a(0, 2) == 0.0);
        CHECK(a(2, 0) == -1.0);
        CHECK(a(2, 1) == -3.0);
        CHECK(a(2, 2) == -3.0);
    }
    SECTION("non-positive gains are rejected") {
        CHECK_THROWS_AS(GainVector({1.0, 0.0}), ValidationError);
        CHECK_THROWS_AS(GainVector({-1.0}), ValidationError);
    }
}

TEST_CASE("characteristic polynomial carries the gains as coefficients") {
    // det(lI - A) = l^n + k_n l^(n-1) + ... + k_1 for the companion form
    const auto coeffs = characteristic_polynomial(companion_from_gains(GainVector{1.0, 3.0, 3.0}));
    REQUIRE(coeffs.size() == 3);
    CHECK_THAT(coeffs[0], WithinAbs(3.0, 1e-12));
    CHECK_THAT(coeffs[1], WithinAbs(3.0, 1e-12));
    CHECK_THAT(coeffs[2], WithinAbs(1.0, 1e-12));
}

TEST_CASE("Routh-Hurwitz test") {
    CHECK(is_hurwitz(companion_from_gains(GainVector{1.0, 2.0})));
    CHECK(is_hurwitz(companion_from_gains(GainVector{1.0, 5.0, 10.0, 10.0, 5.0})));
    // l^3 + 3 l^2 + l + 9: c1*c2 = 3 < c3 = 9, two roots in the right half-plane
    CHECK_FALSE(is_hurwitz(Vec{3.0, 1.0, 9.0}));
    // a saddle
    SquareMatrix saddle(2);
    saddle(0, 1) = 1.0;
    saddle(1, 0) = 1.0;
    CHECK_FALSE(is_hurwitz(saddle));
    // marginal oscillator l^2 + 1
    CHECK_FALSE(is_hurwitz(Vec{0.0, 1.0}));
}

TEST_CASE("solve_lyapunov on frozen cases") {
    SECTION("scalar: a = [[-1]], q = [[1]] gives p = 1/2") {
        SquareMatrix a(1);
        a(0, 0) = -1.0;
        const auto p = solve_lyapunov(a, SymmetricMatrix::identity(1));
        CHECK_THAT(p(0, 0), WithinAbs(0.5, 1e-14));
    }
    SECTION("gains (1,2), Q = I") {
        const auto p =
            solve_lyapunov(companion_from_gains(GainVector{1.0, 2.0}), SymmetricMatrix::identity(2));
        CHECK_THAT(p(0, 0), WithinAbs(1.5, 1e-12));
        CHECK_THAT(p(0, 1), WithinAbs(0.5, 1e-12));
        CHECK_THAT(p(1, 1), WithinAbs(0.5, 1e-12));
    }
    SECTION("gains (1,6), Q = I, solved by hand from the three triangle equations") {
        // -2 p12 = -1; p11 - 6 p12 - p22 = 0; 2 p12 - 12 p22 = -1
        const auto p =
            solve_lyapunov(companion_from_gains(GainVector{1.0, 6.0}), SymmetricMatrix::identity(2));
        CHECK_THAT(p(0, 0), WithinAbs(19.0 / 6.0, 1e-12));
        CHECK_THAT(p(0, 1), WithinAbs(0.5, 1e-12));
        CHECK_THAT(p(1, 1), WithinAbs(1.0 / 6.0, 1e-12));
    }
    SECTION("non-Hurwitz input is rejected") {
        SquareMatrix a(2);
        a(0, 1) = 1.0;
        a(1, 0) = 1.0;
        CHECK_THROWS_AS(solve_lyapunov(a, SymmetricMatrix::identity(2)), DesignError);
    }
}

TEST_CASE("analytic P for the repeated-root family; the quadratic-denominator reading fails") {
    // For gains (mu^2, 2 mu) and Q = I the triangle equations give
    //   p11 = 1/mu + (mu^2+1)/(4 mu),  p12 = 1/(2 mu^2),  p22 = (mu^2+1)/(4 mu^3).
    for (double mu : {0.5, 1.0, 2.0}) {
        const auto a = companion_from_gains(binomial_gains(2, mu));
        const auto p = solve_lyapunov(a, SymmetricMatrix::identity(2));
        const double p11 = 1.0 / mu + (mu * mu + 1.0) / (4.0 * mu);
        const double p12 = 1.0 / (2.0 * mu * mu);
        const double p22 = (mu * mu + 1.0) / (4.0 * mu * mu * mu);
        CHECK_THAT(p(0, 0), WithinAbs(p11, 1e-10));
        CHECK_THAT(p(0, 1), WithinAbs(p12, 1e-10));
        CHECK_THAT(p(1, 1), WithinAbs(p22, 1e-10));
        // the alternative reading with denominator 4 mu^2 solves the equation
        // only at mu = 1
        const double p11_alt = 1.0 / mu + (mu * mu + 1.0) / (4.0 * mu * mu);
        SymmetricMatrix bad(2);
        bad.set(0, 0, p11_alt);
        bad.set(0, 1, p12);
        bad.set(1, 1, p22);
        const double res = lyapunov_residual(a, bad, SymmetricMatrix::identity(2));
        if (mu == 1.0)
            CHECK(res < 1e-12);
        else
            CHECK(res > 1e-3);
    }
}

TEST_CASE("sym_extreme_eigen on frozen cases") {
    SECTION("identity") {
        const auto [lo, hi] = sym_extreme_eigen(SymmetricMatrix::identity(2));
        CHECK(lo == 1.0);
        CHECK(hi == 1.0);
    }
    SECTION("P of gains (1,2): 1 -/+ sqrt(2)/2") {
        SymmetricMatrix p(2);
        p.set(0, 0, 1.5);
        p.set(0, 1, 0.5);
        p.set(1, 1, 0.5);
        const auto [lo, hi] = sym_extreme_eigen(p);
        CHECK_THAT(lo, WithinAbs(1.0 - std::sqrt(2.0) / 2.0, 1e-12));
        CHECK_THAT(hi, WithinAbs(1.0 + std::sqrt(2.0) / 2.0, 1e-12));
    }
    SECTION("P of gains (1,6): trace 10/3, det 5/18") {
        SymmetricMatrix p(2);
        p.set(0, 0, 19.0 / 6.0);
        p.set(0, 1, 0.5);
        p.set(1, 1, 1.0 / 6.0);
        const auto [lo, hi] = sym_extreme_eigen(p);
        CHECK_THAT(lo, WithinAbs((10.0 / 3.0 - std::sqrt(10.0)) / 2.0, 1e-12));
        CHECK_THAT(hi, WithinAbs((10.0 / 3.0 + std::sqrt(10.0)) / 2.0, 1e-12));
    }
}

TEST_CASE("Jacobi agrees with the 2x2 closed form", "[property]") {
    for (int trial = 0; trial < 200; ++trial) {
        const double a = testutil::uniform(-10.0, 10.0);
        const double b = testutil::uniform(-10.0, 10.0);
        const double c = testutil::uniform(-10.0, 10.0);
        SymmetricMatrix m(2);
        m.set(0, 0, a);
        m.set(0, 1, b);
        m.set(1, 1, c);
        const auto [lo, hi] = sym_extreme_eigen(m);
        const auto [clo, chi] = testutil::eig2x2_closed_form(a, b, c);
        CHECK_THAT(lo, WithinAbs(clo, 1e-12));
        CHECK_THAT(hi, WithinAbs(chi, 1e-12));
    }
}

TEST_CASE("certificate invariants over random binomial designs", "[property]") {
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = static_cast<std::size_t>(1 + trial % 6);
        const double mu = testutil::uniform(0.5, 4.0);
        const auto a = companion_from_gains(binomial_gains(n, mu));
        const auto q = SymmetricMatrix::identity(n);
        const auto cert = make_certificate(a, q);
        CHECK(cert.lambda_min_p > 0.0);
        CHECK(cert.lambda_min_p <= cert.lambda_max_p);
        CHECK(cert.residual_norm < 1e-10 * (1.0 + q.max_abs()));
        // symmetry is exact by construction
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) CHECK(cert.p(i, j) == cert.p(j, i));
    }
}

TEST_CASE("make_certificate validates Q") {
    const auto a = companion_from_gains(GainVector{1.0, 2.0});
    SymmetricMatrix q(2);  // zero matrix is not PD
    CHECK_THROWS_AS(make_certificate(a, q), ValidationError);
}

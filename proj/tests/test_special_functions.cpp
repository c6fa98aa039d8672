#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "klbounds/special_functions.hpp"
#include "oracles.hpp"

using namespace klbounds;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("log_gamma: exact anchors") {
    REQUIRE_THAT(log_gamma(1.0), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(log_gamma(2.0), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(log_gamma(0.5), WithinRel(0.57236494292470009, 1e-14));  // ln sqrt(pi)
    REQUIRE_THAT(log_gamma(6.0), WithinRel(4.7874917427820460, 1e-14));   // ln 120
}

TEST_CASE("log_gamma: 1e-13 relative accuracy across twelve decades") {
    for (int i = 0; i <= 2400; ++i) {
        const double x = std::pow(10.0, -6.0 + 12.0 * i / 2400.0);
        const double ref = std::lgamma(x);
        REQUIRE_THAT(log_gamma(x), WithinAbs(ref, 1e-13 * std::max(1.0, std::fabs(ref))));
    }
}

TEST_CASE("log_gamma: domain errors") {
    REQUIRE_THROWS_AS(log_gamma(0.0), std::domain_error);
    REQUIRE_THROWS_AS(log_gamma(-1.5), std::domain_error);
    REQUIRE_THROWS_AS(log_gamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    REQUIRE_THROWS_AS(log_gamma(pos_inf), std::domain_error);
}

TEST_CASE("beta_tail: anchors") {
    REQUIRE_THAT(beta_tail(1.0, 1.0, 0.25), WithinAbs(0.75, 1e-15));  // uniform
    REQUIRE_THAT(beta_tail(2.5, 7.0, 0.0), WithinAbs(1.0, 0.0));
    REQUIRE_THAT(beta_tail(2.5, 7.0, 1.0), WithinAbs(0.0, 0.0));
    // closed-form polynomial CDF of Beta(2,3): direct integration of
    // 12 x (1-x)^2 up to 1/2 gives 0.6875
    REQUIRE_THAT(beta_tail(2.0, 3.0, 0.5), WithinAbs(0.3125, 1e-12));
}

TEST_CASE("beta_tail: exact binomial-sum identity for integer shapes") {
    for (int a = 1; a <= 6; ++a)
        for (int b = 1; b <= 6; ++b)
            for (int i = 1; i <= 19; ++i) {
                const double u = i / 20.0;
                REQUIRE_THAT(beta_tail(a, b, u),
                             WithinAbs(oracles::beta_tail_binomial(a, b, u), 1e-12));
            }
}

TEST_CASE("beta_tail: quadrature oracle on fractional shapes") {
    const double params[][2] = {{0.5, 0.5}, {0.5, 3.2}, {4.7, 0.8}, {2.3, 5.9}, {10.5, 1.5}};
    for (const auto& ab : params)
        for (int i = 1; i <= 9; ++i) {
            const double u = i / 10.0;
            const double ref = oracles::beta_tail_quadrature(ab[0], ab[1], u);
            REQUIRE_THAT(beta_tail(ab[0], ab[1], u),
                         WithinAbs(ref, 1e-9 * std::max(1.0, ref)));
        }
}

TEST_CASE("beta_tail: monotone in u, symmetric in (a,b)") {
    oracles::InstanceRng gen(2024);
    for (int t = 0; t < 50; ++t) {
        const double a = gen.uniform(0.3, 12.0), b = gen.uniform(0.3, 12.0);
        double prev = 1.0;
        for (int i = 0; i <= 40; ++i) {
            const double u = i / 40.0;
            const double tail = beta_tail(a, b, u);
            REQUIRE(tail <= prev + 1e-13);
            prev = tail;
            REQUIRE_THAT(tail, WithinAbs(1.0 - beta_tail(b, a, 1.0 - u), 1e-12));
        }
    }
}

TEST_CASE("beta_tail: domain errors") {
    REQUIRE_THROWS_AS(beta_tail(0.0, 1.0, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(beta_tail(1.0, -2.0, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(beta_tail(1.0, 1.0, 1.5), std::domain_error);
    REQUIRE_THROWS_AS(beta_tail(1.0, 1.0, -0.1), std::domain_error);
}

TEST_CASE("lambert_w0: anchors") {
    REQUIRE(lambert_w0(0.0) == 0.0);
    REQUIRE_THAT(lambert_w0(std::exp(1.0)), WithinAbs(1.0, 1e-14));
    // branch point: w = -1, resolvable only to ~sqrt(eps) in w but the
    // defining residual stays tiny
    REQUIRE_THAT(lambert_w0(-std::exp(-1.0)), WithinAbs(-1.0, 1e-7));
}

TEST_CASE("lambert_w0: residual contract on a log-spaced grid") {
    std::vector<double> xs = {-std::exp(-1.0), -0.36, -0.2, -1e-3, -1e-9, 0.0};
    for (int i = 0; i <= 600; ++i) xs.push_back(std::pow(10.0, -9.0 + 15.0 * i / 600.0));
    for (double x : xs) {
        const double w = lambert_w0(x);
        REQUIRE(w >= -1.0 - 1e-12);
        REQUIRE_THAT(w * std::exp(w), WithinAbs(x, 1e-13 * std::max(1.0, std::fabs(x))));
    }
}

TEST_CASE("lambert_w0: domain error below the branch point") {
    REQUIRE_THROWS_AS(lambert_w0(-0.37), std::domain_error);
    REQUIRE_THROWS_AS(lambert_w0(std::numeric_limits<double>::quiet_NaN()),
                      std::domain_error);
}

TEST_CASE("kl_binary: conventions and anchors") {
    for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) REQUIRE(kl_binary(p, p) == 0.0);
    REQUIRE_THAT(kl_binary(0.0, 0.6), WithinRel(0.91629073187415506, 1e-14));  // ln(1/0.4)
    REQUIRE(kl_binary(0.3, 0.0) == pos_inf);
    REQUIRE(kl_binary(0.3, 1.0) == pos_inf);
    REQUIRE(kl_binary(0.0, 0.0) == 0.0);
    REQUIRE(kl_binary(1.0, 1.0) == 0.0);
    // the d=2 reduction value used throughout: kl(0.3 || 0.5)
    REQUIRE_THAT(kl_binary(0.3, 0.5), WithinRel(0.082282878505051846, 1e-14));
    REQUIRE_THROWS_AS(kl_binary(-0.1, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(kl_binary(0.5, 1.2), std::domain_error);
}

TEST_CASE("kl_binary: Pinsker lower bound on a grid") {
    for (int i = 1; i <= 39; ++i)
        for (int j = 1; j <= 39; ++j) {
            const double p = i / 40.0, q = j / 40.0;
            REQUIRE(kl_binary(p, q) >= 2.0 * (p - q) * (p - q) - 1e-12);
        }
}

TEST_CASE("kl_discrete: reduction, conventions, domain") {
    const std::vector<double> p = {0.3, 0.7}, q = {0.5, 0.5};
    REQUIRE_THAT(kl_discrete(p, q), WithinRel(kl_binary(0.3, 0.5), 1e-14));
    REQUIRE(kl_discrete(p, p) == 0.0);

    const std::vector<double> point1 = {1.0, 0.0}, point2 = {0.0, 1.0};
    REQUIRE(kl_discrete(point1, point2) == pos_inf);

    const std::vector<double> short_q = {1.0};
    REQUIRE_THROWS_AS(kl_discrete(p, short_q), std::domain_error);
    const std::vector<double> unnormalized = {0.4, 0.4};
    REQUIRE_THROWS_AS(kl_discrete(p, unnormalized), std::domain_error);
    const std::vector<double> negative = {-0.2, 1.2};
    REQUIRE_THROWS_AS(kl_discrete(negative, q), std::domain_error);
}

TEST_CASE("kl_discrete: joint convexity on random instances") {
    oracles::InstanceRng gen(77);
    for (int t = 0; t < 200; ++t) {
        const int d = gen.uniform_int(2, 5);
        const auto p1 = gen.simplex(d, 0.01), q1 = gen.simplex(d, 0.01);
        const auto p2 = gen.simplex(d, 0.01), q2 = gen.simplex(d, 0.01);
        std::vector<double> pm(d), qm(d);
        for (int i = 0; i < d; ++i) {
            pm[i] = 0.5 * (p1[i] + p2[i]);
            qm[i] = 0.5 * (q1[i] + q2[i]);
        }
        REQUIRE(kl_discrete(pm, qm) <=
                0.5 * (kl_discrete(p1, q1) + kl_discrete(p2, q2)) + 1e-12);
    }
}

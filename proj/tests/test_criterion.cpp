#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qmcar/criterion.hpp"
#include "qmcar/driver.hpp"
#include "qmcar/errors.hpp"
#include "qmcar/experiments.hpp"

using namespace qmcar;

TEST_CASE("frequency weight") {
    CHECK(frequency_weight({1, 0}) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(frequency_weight({1, 1}) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(frequency_weight({3, 4}) == doctest::Approx(0.175).epsilon(1e-15));
    CHECK(frequency_weight({-3, 4}) == frequency_weight({3, -4}));
    CHECK_THROWS_AS(frequency_weight({0, 0}), DomainError);
    CHECK(FrequencyVector{-5, 3}.sup_norm() == 5);
}

TEST_CASE("exponential sums") {
    const DriverSet origin{{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, Family::random, 3, 1};
    CHECK(exp_sum(origin, {4, -7}) == doctest::Approx(1.0).epsilon(1e-15));

    // F_5 = 5, F_4 = 3: (2,1) survives the divisibility test, (1,1) does not
    const DriverSet f5 = fibonacci_lattice(5);
    CHECK(exp_sum(f5, {2, 1}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exp_sum(f5, {1, 1}) <= 1e-12);
    for (const FrequencyVector n : {FrequencyVector{1, 2}, {3, 1}, {-2, 4}}) {
        const double v = exp_sum(f5, n);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("general criterion on a single point at the origin") {
    const DriverSet one{{{0.0, 0.0}}, Family::random, 1, std::nullopt};
    // 8 frequencies of sup-norm 1: 4 with weight 1.5, 4 with weight 1.25
    CHECK(qr_general(one, 2).value == doctest::Approx(11.5).epsilon(1e-14));
    CHECK(qr_general(one, 2).method == CriterionMethod::general);
}

TEST_CASE("general criterion contracts on random sets") {
    const CriterionResult r = qr_general(random_driver(10000, 4), 16);
    CHECK(r.value < 2.0);
    CHECK(r.value >= 1.0 / 16.0);
}

TEST_CASE("cost cap and preconditions") {
    CHECK_THROWS_WITH_AS(qr_general(random_driver(10000, 1), 4096, 1e9),
                         doctest::Contains("cap"), DomainError);
    CHECK_THROWS_AS(qr_general(random_driver(10, 1), 1), DomainError);
    CHECK_THROWS_AS(qr_fibonacci(5, 6), DomainError);   // R > F_k
    CHECK_THROWS_AS(qr_fibonacci(5, 1), DomainError);
    CHECK_THROWS_AS(qr_fibonacci(2, 2), DomainError);
}

TEST_CASE("fibonacci fast path matches brute enumeration at k=5, R=5") {
    const CriterionResult fast = qr_fibonacci(5, 5);
    CHECK(fast.method == CriterionMethod::fibonacci_fast);
    CHECK(fast.m == 5);
    const double brute = oracles::brute_qr_fibonacci(5, 5);
    CHECK(fast.value == doctest::Approx(brute).epsilon(1e-14));
    CHECK(fast.value == doctest::Approx(5.0173472546259292).epsilon(1e-13));
    CHECK(qr_general(fibonacci_lattice(5), 5).value ==
          doctest::Approx(fast.value).epsilon(1e-12));
}

TEST_CASE("fast path equals the general path for k = 5..14") {
    for (int k = 5; k <= 14; ++k) {
        const std::int64_t r = default_r_for_fibonacci(k);
        const double fast = qr_fibonacci(k, r).value;
        const double general = qr_general(fibonacci_lattice(k), r).value;
        CHECK(std::abs(fast - general) <= 1e-9);
        CHECK(fast == doctest::Approx(oracles::brute_qr_fibonacci(k, r)).epsilon(1e-12));
    }
}

TEST_CASE("criterion value never falls below 1/R") {
    for (int k : {5, 9, 13, 20, 30}) {
        for (std::int64_t r : {2LL, 5LL, 21LL}) {
            if (r > fibonacci_number(k)) continue;
            CHECK(qr_fibonacci(k, r).value >= 1.0 / static_cast<double>(r));
        }
    }
}

TEST_CASE("default criterion cutoff") {
    CHECK(default_r_for_fibonacci(9) == 8);    // F_6
    CHECK(default_r_for_fibonacci(10) == 13);  // F_7
    CHECK(default_r_for_fibonacci(12) == 21);  // F_8
    CHECK_THROWS_AS(default_r_for_fibonacci(2), DomainError);
}

TEST_CASE("criterion of the fibonacci family decays like a power of F_k") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 9; k <= 24; ++k) {
        pts.emplace_back(static_cast<double>(fibonacci_number(k)),
                         qr_fibonacci(k, default_r_for_fibonacci(k)).value);
    }
    const SlopeFit fit = fit_slope(pts);
    CHECK(fit.slope >= -0.80);
    CHECK(fit.slope <= -0.55);
}

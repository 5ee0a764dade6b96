#include <doctest.h>

#include "moddeg2/arith.hpp"

#include <stdexcept>

using namespace moddeg2::arith;

TEST_CASE("primality") {
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(24859));
    CHECK_FALSE(is_prime(2537)); // 43 * 59
    CHECK(is_prime(2147483647ull));
    CHECK_FALSE(is_prime(2147483647ull * 2147483629ull));
    // strong pseudoprime to several bases
    CHECK_FALSE(is_prime(3215031751ull));
}

TEST_CASE("factor") {
    CHECK(factor(1).factors.empty());
    auto f = factor(2537);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == std::pair<std::uint64_t, int>{43, 1});
    CHECK(f.factors[1] == std::pair<std::uint64_t, int>{59, 1});
    auto g = factor(243);
    REQUIRE(g.factors.size() == 1);
    CHECK(g.factors[0] == std::pair<std::uint64_t, int>{3, 5});
    CHECK(g.num_odd_primes() == 1);
    CHECK(factor(2 * 3 * 5 * 7).num_odd_primes() == 3);
    // a 30-bit semiprime exercises the rho path
    auto h = factor(1000003ull * 999983ull);
    REQUIRE(h.factors.size() == 2);
    CHECK(h.factors[0].first == 999983);
    CHECK(h.factors[1].first == 1000003);
}

TEST_CASE("u^2 + 16 v^2 representation") {
    auto r = represent_u2_plus_16v2(17);
    CHECK(r.u == 1);
    CHECK(r.v == 1);
    r = represent_u2_plus_16v2(73);
    CHECK(r.u == 3);
    CHECK(r.v == 2);
    r = represent_u2_plus_16v2(113);
    CHECK(r.u == 7);
    CHECK(r.v == 2);
    CHECK_THROWS_AS(represent_u2_plus_16v2(11), std::invalid_argument);
    CHECK_THROWS_AS(represent_u2_plus_16v2(33), std::invalid_argument); // composite ≡ 1 mod 8
}

TEST_CASE("merel criterion examples") {
    CHECK_FALSE(merel_criterion(17));  // v=1, (N-1)/8=2
    CHECK(merel_criterion(113));       // v=2, (N-1)/8=14
    CHECK_FALSE(merel_criterion(73));  // v=2, (N-1)/8=9
}

TEST_CASE("representation exists, is unique, and parity matches brute force") {
    for (std::uint64_t N = 17; N <= 100000; ++N) {
        if (N % 8 != 1 || !is_prime(N)) continue;
        // exhaustive enumeration of all u, v > 0 with u^2 + 16 v^2 = N
        int found = 0;
        std::uint64_t v_found = 0;
        for (std::uint64_t v = 1; 16 * v * v < N; ++v) {
            std::uint64_t rest = N - 16 * v * v;
            auto u = perfect_square_root(rest);
            if (u && *u > 0) {
                ++found;
                v_found = v;
            }
        }
        REQUIRE(found == 1);
        auto rep = represent_u2_plus_16v2(N);
        CHECK(rep.u * rep.u + 16 * rep.v * rep.v == N);
        CHECK(rep.v == v_found);
        CHECK(rep.u % 2 == 1);
    }
}

TEST_CASE("neumann-setzer") {
    auto r = neumann_setzer_test(73);
    REQUIRE(r.has_value());
    CHECK(r->u == 3);
    CHECK(r->odd_degree); // 73 ≡ 9 mod 16
    r = neumann_setzer_test(113);
    REQUIRE(r.has_value());
    CHECK(r->u == 7);
    CHECK_FALSE(r->odd_degree); // 113 ≡ 1 mod 16
    CHECK_FALSE(neumann_setzer_test(11).has_value());
    CHECK_THROWS_AS(neumann_setzer_test(15), std::invalid_argument);
}

TEST_CASE("neumann-setzer consistent with merel") {
    // for N = u^2 + 64 ≡ 1 mod 8: odd degree iff NOT merel_criterion(N)
    int seen = 0;
    for (std::uint64_t N = 65; N <= 100000; ++N) {
        if (!is_prime(N)) continue;
        auto r = neumann_setzer_test(N);
        if (!r) continue;
        ++seen;
        REQUIRE(N % 8 == 1);
        CHECK(r->odd_degree == !merel_criterion(N));
    }
    CHECK(seen > 10);
}

TEST_CASE("kronecker") {
    CHECK(kronecker(-1, 5) == 1);
    CHECK(kronecker(-1, 7) == -1);
    CHECK(kronecker(2, 7) == 1);
    CHECK(kronecker(2, 5) == -1);
    CHECK(kronecker(-3, 7) == 1);
    CHECK(kronecker(10, 5) == 0);
    // multiplicativity spot check
    for (std::int64_t a = -20; a <= 20; ++a)
        for (std::int64_t b = -20; b <= 20; ++b)
            CHECK(kronecker(a * b, 31) == kronecker(a, 31) * kronecker(b, 31));
}

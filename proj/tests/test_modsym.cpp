#include <doctest.h>

#include "moddeg2/arith.hpp"
#include "moddeg2/curve.hpp"
#include "moddeg2/modsym.hpp"

using namespace moddeg2;
using linalg::Mat64;

namespace {
// independent genus oracle: dimension counting through the standard index,
// elliptic point, and cusp formulas, assembled from scratch
std::int64_t genus_oracle(std::int64_t N) {
    auto primes = arith::factor(static_cast<std::uint64_t>(N));
    std::int64_t mu = N, nu2 = 1, nu3 = 1, nuinf = 0;
    for (auto& [p, e] : primes.factors) mu = mu / static_cast<std::int64_t>(p) * (p + 1);
    if (N % 4 == 0)
        nu2 = 0;
    else
        for (auto& [p, e] : primes.factors) {
            if (p == 2) continue;
            nu2 *= (p % 4 == 1) ? 2 : 0;
        }
    if (N % 9 == 0)
        nu3 = 0;
    else
        for (auto& [p, e] : primes.factors) {
            if (p == 3) continue;
            nu3 *= (p % 3 == 1) ? 2 : 0;
        }
    for (std::int64_t d = 1; d <= N; ++d) {
        if (N % d) continue;
        std::int64_t g = arith::gcd_i64(d, N / d), phi = g;
        for (auto& [p, e] : arith::factor(static_cast<std::uint64_t>(g)).factors)
            phi = phi / static_cast<std::int64_t>(p) * (static_cast<std::int64_t>(p) - 1);
        nuinf += phi;
    }
    std::int64_t twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nuinf;
    REQUIRE(twelve_g % 12 == 0);
    return twelve_g / 12;
}
} // namespace

TEST_CASE("space dimensions at small levels") {
    auto s1 = modsym::build_space(1);
    CHECK(s1.cuspidal_dim() == 0);
    auto s11 = modsym::build_space(11);
    CHECK(s11.cuspidal_dim() == 2);
    CHECK(s11.genus() == 1);
    CHECK(s11.cusp_count() == 2);
    auto s37 = modsym::build_space(37);
    CHECK(s37.cuspidal_dim() == 4);
    CHECK_THROWS_AS(modsym::build_space(0), std::invalid_argument);
    CHECK_THROWS_AS(modsym::build_space(100000), std::invalid_argument);
}

TEST_CASE("cuspidal dimension equals twice the genus for N <= 120") {
    for (std::int64_t N = 1; N <= 120; ++N) {
        auto sp = modsym::build_space(N);
        CHECK(sp.cuspidal_dim() == 2 * genus_oracle(N));
        CHECK(sp.genus() == genus_oracle(N));
    }
}

TEST_CASE("level 11 hecke eigenvalues match point counts") {
    auto sp = modsym::build_space(11);
    auto E = curve::derive_invariants({0, -1, 1, -10, -20});
    CHECK(sp.hecke_matrix(1) == Mat64::identity(2));
    for (std::int64_t ell : {2, 3, 5, 7, 13, 17, 19, 23}) {
        auto T = sp.hecke_matrix(ell);
        auto a = curve::ap_point_count(E, static_cast<std::uint64_t>(ell));
        CHECK(T.at(0, 0) == a);
        CHECK(T.at(1, 1) == a);
        CHECK(T.at(0, 1) == 0);
        CHECK(T.at(1, 0) == 0);
    }
    // U_11 eigenvalue equals a_11 = 1 for the level-11 form
    auto U = sp.hecke_matrix(11);
    CHECK(U.at(0, 0) == 1);
    CHECK(U.at(1, 1) == 1);
}

TEST_CASE("hecke commutativity and recurrences") {
    for (std::int64_t N : {11, 15, 23, 37, 45}) {
        auto sp = modsym::build_space(N);
        std::vector<Mat64> ops;
        for (std::int64_t n : {2, 3, 5, 7}) ops.push_back(sp.hecke_matrix(n));
        for (std::size_t i = 0; i < ops.size(); ++i)
            for (std::size_t j = i + 1; j < ops.size(); ++j) CHECK(linalg::commute(ops[i], ops[j]));
        for (std::int64_t p : {2, 3, 5}) {
            if (N % p == 0) continue;
            auto Tp = sp.hecke_matrix(p);
            auto Tp2 = sp.hecke_matrix(p * p);
            auto expect = linalg::sub(linalg::mul(Tp, Tp), linalg::scale(Mat64::identity(sp.cuspidal_dim()), p));
            CHECK(Tp2 == expect);
        }
        // multiplicativity
        if (N % 6 != 0) CHECK(sp.hecke_matrix(6) == linalg::mul(sp.hecke_matrix(2), sp.hecke_matrix(3)));
    }
}

TEST_CASE("atkin-lehner involutions") {
    auto s11 = modsym::build_space(11);
    CHECK(s11.atkin_lehner_matrix(1) == Mat64::identity(2));
    auto W = s11.atkin_lehner_matrix(11);
    CHECK(linalg::mul(W, W) == Mat64::identity(2));
    auto s15 = modsym::build_space(15);
    for (std::int64_t Q : {1, 3, 5, 15}) {
        auto WQ = s15.atkin_lehner_matrix(Q);
        CHECK(linalg::mul(WQ, WQ) == Mat64::identity(2));
        // commutes with good hecke operators
        auto T2 = s15.hecke_matrix(2);
        CHECK(linalg::commute(WQ, T2));
    }
    // W_3 W_5 = W_15
    CHECK(linalg::mul(s15.atkin_lehner_matrix(3), s15.atkin_lehner_matrix(5)) ==
          s15.atkin_lehner_matrix(15));
    CHECK_THROWS_AS(s15.atkin_lehner_matrix(2), std::invalid_argument);
    CHECK_THROWS_AS(modsym::build_space(12).atkin_lehner_matrix(2), std::invalid_argument);
}

TEST_CASE("star involution squares to one and commutes with hecke") {
    for (std::int64_t N : {11, 15, 37}) {
        auto sp = modsym::build_space(N);
        auto S = sp.star_matrix();
        CHECK(linalg::mul(S, S) == Mat64::identity(sp.cuspidal_dim()));
        CHECK(linalg::commute(S, sp.hecke_matrix(2)));
        CHECK(linalg::commute(S, sp.hecke_matrix(3)));
    }
}

TEST_CASE("eigenform location") {
    auto sp = modsym::build_space(11);
    auto E = curve::derive_invariants({0, -1, 1, -10, -20});
    auto ap = [&](std::int64_t ell) { return curve::ap_point_count(E, static_cast<std::uint64_t>(ell)); };
    auto line = modsym::locate_eigenform(sp, ap);
    CHECK(line.coords.size() == 2);
    // wrong data: all-zero eigensystem does not exist at level 11
    auto zero = [](std::int64_t) -> std::int64_t { return 0; };
    CHECK_THROWS_AS(modsym::locate_eigenform(sp, zero), std::runtime_error);

    // level 37: two distinct rational eigenforms
    auto s37 = modsym::build_space(37);
    auto E37a = curve::derive_invariants({0, 0, 1, -1, 0});
    auto E37b = curve::derive_invariants({0, 1, 1, -23, -50});
    auto la = modsym::locate_eigenform(
        s37, [&](std::int64_t l) { return curve::ap_point_count(E37a, static_cast<std::uint64_t>(l)); });
    auto lb = modsym::locate_eigenform(
        s37, [&](std::int64_t l) { return curve::ap_point_count(E37b, static_cast<std::uint64_t>(l)); });
    CHECK(la.coords != lb.coords);
}

TEST_CASE("analytic rank parity") {
    struct Case {
        std::int64_t N;
        std::array<std::int64_t, 5> a;
        modsym::RankParity expect;
    };
    const Case cases[] = {
        {11, {0, -1, 1, -10, -20}, modsym::RankParity::Even},
        {19, {0, 1, 1, -9, -15}, modsym::RankParity::Even},
        {37, {0, 0, 1, -1, 0}, modsym::RankParity::Odd},
        {37, {0, 1, 1, -23, -50}, modsym::RankParity::Even},
        {43, {0, 1, 1, 0, 0}, modsym::RankParity::Odd},
        {53, {1, -1, 1, 0, 0}, modsym::RankParity::Odd},
    };
    for (auto& c : cases) {
        auto sp = modsym::build_space(c.N);
        auto E = curve::derive_invariants(c.a);
        auto line = modsym::locate_eigenform(
            sp, [&](std::int64_t l) { return curve::ap_point_count(E, static_cast<std::uint64_t>(l)); });
        CHECK(modsym::analytic_rank_parity(sp, line) == c.expect);
    }
}

TEST_CASE("path coordinates are consistent with the boundary") {
    // {0, infinity} maps to the symbol of the identity coset; its boundary is
    // [infinity] - [0], nonzero; paths between equivalent cusps are cuspidal
    auto sp = modsym::build_space(11);
    modsym::Cusp zero{linalg::Int(0), linalg::Int(1)};
    modsym::Cusp inf{linalg::Int(1), linalg::Int(0)};
    auto v = sp.path_coords(zero, inf);
    bool nonzero = false;
    for (auto x : v)
        if (x) nonzero = true;
    CHECK(nonzero);
}

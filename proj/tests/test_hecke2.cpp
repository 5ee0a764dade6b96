#include <doctest.h>

#include "moddeg2/arith.hpp"
#include "moddeg2/curve.hpp"
#include "moddeg2/hecke2.hpp"
#include "moddeg2/modsym.hpp"

using namespace moddeg2;
using linalg::MatF2;

TEST_CASE("lattice at level 11") {
    auto sp = modsym::build_space(11);
    auto L = hecke2::hecke_lattice(sp, true);
    CHECK(L.rank == 1);
    auto facs = hecke2::decompose_mod2(L);
    REQUIRE(facs.size() == 1);
    CHECK(facs[0].d_m == 1);
    CHECK(facs[0].residue_degree == 1);
    CHECK_FALSE(facs[0].eisenstein); // a_3 = -1 is odd
    CHECK(hecke2::tm_equals_z2(facs[0]));
    auto c3 = hecke2::eigensystem_coefficient(L, facs[0], 3);
    CHECK(c3.in_f2);
    CHECK(c3.f2_value); // a_3 = -1 ≡ 1
    auto c2 = hecke2::eigensystem_coefficient(L, facs[0], 2);
    CHECK(c2.in_f2);
    CHECK_FALSE(c2.f2_value); // a_2 = -2 ≡ 0
    auto c1 = hecke2::eigensystem_coefficient(L, facs[0], 1);
    CHECK(c1.in_f2);
    CHECK(c1.f2_value);
    CHECK_FALSE(hecke2::lemma_local_witness(L, facs[0]).has_value());
}

TEST_CASE("level 17: one eisenstein factor with d=1") {
    auto sp = modsym::build_space(17);
    auto L = hecke2::hecke_lattice(sp, true);
    CHECK(L.rank == 1);
    auto facs = hecke2::decompose_mod2(L);
    REQUIRE(facs.size() == 1);
    CHECK(facs[0].d_m == 1);
    CHECK(facs[0].eisenstein);
    CHECK(hecke2::tm_equals_z2(facs[0]));
    CHECK_FALSE(arith::merel_criterion(17)); // consistent: d_m = 1
}

TEST_CASE("level 23: residue field F4") {
    auto sp = modsym::build_space(23);
    auto L = hecke2::hecke_lattice(sp, true);
    CHECK(L.rank == 2);
    auto facs = hecke2::decompose_mod2(L);
    REQUIRE(facs.size() == 1);
    CHECK(facs[0].d_m == 2);
    CHECK(facs[0].residue_degree == 2);
    CHECK_FALSE(facs[0].eisenstein);
    CHECK(hecke2::tm_verdict(facs[0]) == hecke2::TmVerdict::ResidueFieldTooLarge);
    // the eigenvalue of T_2 generates F4: minimal polynomial x^2 + x + 1
    auto c2 = hecke2::eigensystem_coefficient(L, facs[0], 2);
    CHECK_FALSE(c2.in_f2);
    CHECK(c2.minpoly.degree() == 2);
}

TEST_CASE("level 37: the two rational forms are congruent mod 2") {
    auto sp = modsym::build_space(37);
    auto L = hecke2::hecke_lattice(sp, true);
    CHECK(L.rank == 2);
    auto facs = hecke2::decompose_mod2(L);
    REQUIRE(facs.size() == 1);
    CHECK(facs[0].d_m == 2);
    CHECK(facs[0].residue_degree == 1);
    CHECK(hecke2::tm_verdict(facs[0]) == hecke2::TmVerdict::BiggerByDimension);
    // lemma witness: two distinct nonzero prefixes annihilated by m^2
    auto w = hecke2::lemma_local_witness(L, facs[0]);
    REQUIRE(w.has_value());
    CHECK(w->first.an != w->second.an);
    bool nz1 = false, nz2 = false;
    for (bool b : w->first.an) nz1 |= b;
    for (bool b : w->second.an) nz2 |= b;
    CHECK(nz1);
    CHECK(nz2);
}

TEST_CASE("witness prefixes are annihilated by m^2 (direct matrix check)") {
    auto sp = modsym::build_space(37);
    auto L = hecke2::hecke_lattice(sp, true);
    auto facs = hecke2::decompose_mod2(L);
    const auto& f = facs[0];
    REQUIRE(f.d_m >= 2);
    // build m = {x : e x in nil} and verify lambda((u v) T_n) = 0 directly
    // via the structure constants, for the functional recovered from each
    // prefix: lambda(T_n) = a_n
    auto w = hecke2::lemma_local_witness(L, facs[0]);
    REQUIRE(w.has_value());
    // reconstruct the functionals lambda on A from the prefixes: since the
    // T_n span A, solve lambda from a basis of {T_n}
    for (const auto& prefix : {w->first, w->second}) {
        // find lambda with lambda(tn) = a_n for n = 1..sturm by linear algebra
        MatF2 sys(L.sturm, L.rank);
        std::vector<bool> rhs(L.sturm);
        for (int n = 1; n <= L.sturm; ++n) {
            auto tn = L.tn_mod2(n);
            for (int t = 0; t < L.rank; ++t) sys.set(n - 1, t, tn[t]);
            rhs[n - 1] = prefix.an[n - 1];
        }
        auto lambda = linalg::solve_f2(sys, rhs);
        REQUIRE(lambda.has_value());
        // m-basis: vectors x with (idempotent * x) in the nilradical, plus
        // every other factor; simplest executable test: for all u, v in the
        // maximal ideal spanned by {nil basis, other-factor unit multiples},
        // check lambda(u * v * T_n) = 0
        std::vector<std::vector<bool>> mgens;
        for (int i = 0; i < f.nil_basis.rows; ++i) {
            std::vector<bool> r(L.rank);
            for (int j = 0; j < L.rank; ++j) r[j] = f.nil_basis.get(i, j);
            mgens.push_back(r);
        }
        for (const auto& g : facs)
            if (&g != &f)
                for (int i = 0; i < g.block_basis.rows; ++i) {
                    std::vector<bool> r(L.rank);
                    for (int j = 0; j < L.rank; ++j) r[j] = g.block_basis.get(i, j);
                    mgens.push_back(r);
                }
        for (auto& u : mgens)
            for (auto& v : mgens) {
                auto uv = L.multiply(u, v);
                for (int n = 1; n <= L.sturm; ++n) {
                    auto x = L.multiply(uv, L.tn_mod2(n));
                    bool val = false;
                    for (int t = 0; t < L.rank; ++t)
                        if ((*lambda)[t] && x[t]) val = !val;
                    CHECK_FALSE(val);
                }
            }
    }
}

TEST_CASE("structure constants are consistent with mod-2 matrix products") {
    for (std::int64_t N : {11, 23, 37, 67}) {
        auto sp = modsym::build_space(N);
        auto L = hecke2::hecke_lattice(sp);
        REQUIRE(static_cast<int>(L.basis_mod2.size()) == L.rank);
        for (int i = 0; i < L.rank; ++i)
            for (int j = 0; j < L.rank; ++j) {
                MatF2 prod = linalg::mul_f2(L.basis_mod2[i], L.basis_mod2[j]);
                MatF2 combo(prod.rows, prod.cols);
                for (int t = 0; t < L.rank; ++t)
                    if (L.mul_table.get(i * L.rank + j, t))
                        for (std::size_t w = 0; w < combo.bits.size(); ++w)
                            combo.bits[w] ^= L.basis_mod2[t].bits[w];
                CHECK(prod.bits == combo.bits);
            }
    }
}

TEST_CASE("exact and fast lattice paths agree") {
    for (std::int64_t N : {89, 97, 101}) {
        auto sp = modsym::build_space(N);
        // fast path (dim > 40 picks it automatically at these levels; force
        // comparison through decompose output invariants instead)
        auto L = hecke2::hecke_lattice(sp);
        auto facs = hecke2::decompose_mod2(L);
        int total = 0;
        for (auto& f : facs) total += f.d_m;
        CHECK(total == L.rank);
        CHECK(L.rank == sp.genus());
    }
}

TEST_CASE("sum of local dimensions equals the rank for primes up to 120") {
    for (std::int64_t N = 11; N <= 120; ++N) {
        if (!arith::is_prime(static_cast<std::uint64_t>(N))) continue;
        auto sp = modsym::build_space(N);
        auto L = hecke2::hecke_lattice(sp);
        CHECK(L.rank == sp.genus());
        auto facs = hecke2::decompose_mod2(L);
        int total = 0;
        int eisenstein = 0;
        for (auto& f : facs) {
            total += f.d_m;
            if (f.eisenstein) ++eisenstein;
        }
        CHECK(total == L.rank);
        CHECK(eisenstein == (N % 8 == 1 ? 1 : 0));
    }
}

TEST_CASE("classify_residual") {
    auto sp = modsym::build_space(11);
    auto L = hecke2::hecke_lattice(sp);
    auto facs = hecke2::decompose_mod2(L);
    auto rc = hecke2::classify_residual(facs[0], 11);
    CHECK(rc.kind == hecke2::ReductionKind::Supersingular);
    CHECK(rc.n_mod_8 == 3);
    CHECK(rc.implied.find("complex") != std::string::npos);

    auto sp19 = modsym::build_space(19);
    auto L19 = hecke2::hecke_lattice(sp19);
    auto facs19 = hecke2::decompose_mod2(L19);
    REQUIRE(facs19.size() == 1);
    auto rc19 = hecke2::classify_residual(facs19[0], 19);
    CHECK(rc19.kind == hecke2::ReductionKind::Supersingular);
    CHECK(rc19.n_mod_8 == 3);

    auto sp17 = modsym::build_space(17);
    auto L17 = hecke2::hecke_lattice(sp17);
    auto facs17 = hecke2::decompose_mod2(L17);
    CHECK_THROWS_AS(hecke2::classify_residual(facs17[0], 17), std::invalid_argument); // eisenstein
}

TEST_CASE("structure dump is stable and line-oriented") {
    auto sp = modsym::build_space(11);
    auto L = hecke2::hecke_lattice(sp);
    auto dump = hecke2::dump_structure(L);
    CHECK(dump.find("level 11 rank 1") == 0);
    CHECK(dump.find("mul 0 0 : 1") != std::string::npos);
    CHECK(dump == hecke2::dump_structure(L));
}

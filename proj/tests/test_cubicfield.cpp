#include <doctest.h>

#include "moddeg2/cubicfield.hpp"
#include "moddeg2/curve.hpp"

using namespace moddeg2;
using linalg::Int;

namespace {
std::uint64_t st = 0x2545F4914F6CDD1Dull;
std::int64_t rnd(std::int64_t lo, std::int64_t hi) {
    st ^= st << 13;
    st ^= st >> 7;
    st ^= st << 17;
    return lo + static_cast<std::int64_t>(st % static_cast<std::uint64_t>(hi - lo + 1));
}

// Sturm-sequence count of real roots of x^3 + a x^2 + b x + c
int real_roots_sturm(double a, double b, double c) {
    // p0 = x^3 + a x^2 + b x + c, p1 = 3x^2 + 2a x + b, then remainders
    auto eval_all = [&](double x) {
        double p0 = ((x + a) * x + b) * x + c;
        double p1 = (3 * x + 2 * a) * x + b;
        // p2 = -(rem of p0 / p1), linear
        double A2 = (2.0 / 9.0) * a * a - (2.0 / 3.0) * b;
        double B2 = (1.0 / 9.0) * a * b - c;
        double p2 = A2 * x + B2;
        // p3 = -(rem of p1 / p2), constant
        double p3;
        if (A2 == 0)
            p3 = 0;
        else {
            double q1 = 3.0 / A2;
            double q0 = (2 * a - q1 * B2) / A2;
            p3 = -(b - q0 * B2);
        }
        int signs = 0;
        double seq[4] = {p0, p1, p2, p3};
        double prev = 0;
        for (double v : seq) {
            if (v == 0) continue;
            if (prev != 0 && ((prev > 0) != (v > 0))) ++signs;
            prev = v;
        }
        return signs;
    };
    double M = 1 + std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
    return eval_all(-M * 2) - eval_all(M * 2);
}
} // namespace

TEST_CASE("two-division field of the level-11 curve") {
    auto E = curve::derive_invariants({0, -1, 1, -10, -20});
    auto K = cubicfield::two_division_field(E);
    CHECK(K.signature == std::make_pair(1, 1));
    CHECK(K.field_disc == -44);
    CHECK(K.index == 968);
    CHECK(K.poly_disc == K.index * K.index * K.field_disc);
    CHECK(cubicfield::split_prime(K, 2).totally_ramified());
    // 11 is tamely ramified: shape P^2 Q
    auto s11 = cubicfield::split_prime(K, 11);
    REQUIRE(s11.shape.size() == 2);
    CHECK(((s11.shape[0] == std::make_pair(1, 1) && s11.shape[1] == std::make_pair(1, 2)) ||
           (s11.shape[0] == std::make_pair(1, 2) && s11.shape[1] == std::make_pair(1, 1))));
}

TEST_CASE("reducible cubic is rejected") {
    auto E = curve::derive_invariants({0, 0, 0, -1, 0}); // full rational 2-torsion
    CHECK_THROWS_AS(cubicfield::two_division_field(E), std::invalid_argument);
}

TEST_CASE("conductor-24859 curve has complex two-division field") {
    auto E = curve::derive_invariants({0, 1, 1, -4, -10});
    auto K = cubicfield::two_division_field(E);
    CHECK(K.signature == std::make_pair(1, 1));
    CHECK(K.poly_disc < 0);
}

TEST_CASE("known small fields") {
    // x^3 - x - 1: the complex cubic field of smallest |disc|
    auto K23 = cubicfield::cubic_field({Int(0), Int(-1), Int(-1)});
    CHECK(K23.field_disc == -23);
    CHECK(K23.index == 1);
    auto h = cubicfield::class_number_naive(K23);
    REQUIRE(h.determined);
    CHECK(h.h == 1);
    // x^3 - x^2 + x + 1: disc -44, Minkowski bound < 2 forces h = 1
    auto K44 = cubicfield::cubic_field({Int(-1), Int(1), Int(1)});
    CHECK(K44.field_disc == -44);
    auto h44 = cubicfield::class_number_naive(K44);
    REQUIRE(h44.determined);
    CHECK(h44.h == 1);
    // x^3 + 4x - 1: disc = -283; class number is determined by the ideal
    // enumeration (its exact value is cross-checked against the Minkowski
    // argument only through h >= 1 here; the parity enters prop5 reporting,
    // which is statistical, not asserted)
    auto K283 = cubicfield::cubic_field({Int(0), Int(4), Int(-1)});
    CHECK(K283.field_disc == -283);
    auto h283 = cubicfield::class_number_naive(K283);
    REQUIRE(h283.determined);
    CHECK(h283.h >= 1);
    // gate: a disc beyond the cap comes back undetermined
    auto gated = cubicfield::class_number_naive(K283, 100);
    CHECK_FALSE(gated.determined);
    CHECK(gated.reason.find("disc too large") != std::string::npos);
}

TEST_CASE("signature matches the sturm-sequence root count") {
    int tested = 0;
    while (tested < 100) {
        std::array<Int, 3> c{Int(rnd(-9, 9)), Int(rnd(-9, 9)), Int(rnd(-9, 9))};
        try {
            auto K = cubicfield::cubic_field(c);
            int nroots = real_roots_sturm(static_cast<double>(c[0]), static_cast<double>(c[1]),
                                          static_cast<double>(c[2]));
            CHECK((K.signature == std::make_pair(1, 1)) == (nroots == 1));
            CHECK((K.poly_disc < 0) == (K.signature == std::make_pair(1, 1)));
            // field disc divides poly disc with square quotient
            Int q = K.poly_disc / K.field_disc;
            CHECK(K.poly_disc % K.field_disc == 0);
            Int r = boost::multiprecision::sqrt(q);
            CHECK(r * r == q);
            ++tested;
        } catch (const std::invalid_argument&) {
        }
    }
}

TEST_CASE("fundamental unit valuation for the level-11 field") {
    auto E = curve::derive_invariants({0, -1, 1, -10, -20});
    auto K = cubicfield::two_division_field(E);
    auto v = cubicfield::fundamental_unit_valuation(K);
    // deg(11a) is odd, so the deformation criteria must not fire: h = 1 (odd)
    // and v < 2
    CHECK(v == cubicfield::UnitValuation::LessThanTwo);
    // signature (3,0) rejected
    auto Kreal = cubicfield::cubic_field({Int(0), Int(-4), Int(1)}); // disc 229 > 0
    CHECK(Kreal.signature == std::make_pair(3, 0));
    CHECK_THROWS_AS(cubicfield::fundamental_unit_valuation(Kreal), std::invalid_argument);
}

TEST_CASE("prop5 predicate on odd-degree case-3b curves") {
    // X0(11) and X0(19) have modular degree one; neither deformation
    // condition may hold
    auto E11 = curve::derive_invariants({0, -1, 1, -10, -20});
    CHECK(cubicfield::prop5_predicate(E11) == cubicfield::Prop5::NeitherDetected);
    auto E19 = curve::derive_invariants({0, 1, 1, -9, -15});
    CHECK(cubicfield::prop5_predicate(E19) == cubicfield::Prop5::NeitherDetected);
    // 2-torsion curve rejected
    auto E17 = curve::derive_invariants({1, -1, 1, -1, -14});
    CHECK_THROWS_AS(cubicfield::prop5_predicate(E17), std::invalid_argument);
}

TEST_CASE("norm is multiplicative") {
    auto K = cubicfield::cubic_field({Int(0), Int(-1), Int(-1)});
    for (int t = 0; t < 20; ++t) {
        Int a1(rnd(-5, 5)), b1(rnd(-5, 5)), c1(rnd(-5, 5));
        Int n1 = cubicfield::element_norm(K, a1, b1, c1);
        Int n2 = cubicfield::element_norm(K, 1, 1, 0);
        // (a1 + b1 t + c1 t^2)(1 + t) with t^3 = t + 1
        Int pa = a1 + c1, pb = a1 + b1 + c1, pc = b1 + c1;
        Int np = cubicfield::element_norm(K, pa, pb, pc);
        CHECK(np == n1 * n2);
    }
}

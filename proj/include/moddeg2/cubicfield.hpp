#pragma once

#include "moddeg2/curve.hpp"
#include "moddeg2/linalg.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace moddeg2::cubicfield {

using linalg::Int;

/// A cubic field K = Q[x]/(f) with f monic irreducible, together with its
/// maximal order in the power basis 1, θ, θ².
struct CubicField {
    std::array<Int, 3> cubic; // f = x^3 + cubic[0] x^2 + cubic[1] x + cubic[2]
    Int poly_disc;
    Int field_disc;
    Int index; // [O_K : Z[θ]] with poly_disc = index^2 * field_disc
    std::pair<int, int> signature; // (3,0) or (1,1)
    // maximal order basis: rows are elements (num[i][0] + num[i][1] θ +
    // num[i][2] θ²)/den
    std::array<std::array<Int, 3>, 3> order_num;
    Int order_den;
};

/// K = Q[x]/(2-division cubic).  Throws std::invalid_argument when the cubic
/// is reducible (rational 2-torsion territory).
CubicField two_division_field(const curve::WeierstrassCurve& E);

/// Build the field data from a monic integral cubic.
CubicField cubic_field(const std::array<Int, 3>& cubic);

/// Factorization shape of a rational prime in O_K.
struct PrimeSplit {
    std::int64_t p;
    // one entry per prime above p: (residue degree f, ramification e)
    std::vector<std::pair<int, int>> shape;
    bool totally_ramified() const { return shape.size() == 1 && shape[0] == std::make_pair(1, 3); }
};

PrimeSplit split_prime(const CubicField& K, std::int64_t p);

struct ClassNumber {
    bool determined = false;
    std::int64_t h = 0;
    std::string reason; // set when undetermined
};

/// Class number by Minkowski-bound ideal enumeration and norm-equation
/// principality search.  Hard desk-scale gates return undetermined instead
/// of guessing.
ClassNumber class_number_naive(const CubicField& K, std::int64_t disc_gate = 1000000);

enum class UnitValuation { AtLeastTwo, LessThanTwo, Undetermined };

/// v_π(ε - 1) >= 2 test for the fundamental unit of a complex cubic field
/// totally ramified at 2 (π the unique prime above 2).  The valuation is
/// computed exactly as v_2(N(ε - 1)).
UnitValuation fundamental_unit_valuation(const CubicField& K, std::int64_t height_bound = 1000000);

enum class Prop5 {
    DeformationViaClassNumber,
    DeformationViaUnit,
    NeitherDetected,
    Undetermined,
};

/// Combined predicate: even class number, or fundamental unit ≡ 1 mod π².
Prop5 prop5_predicate(const curve::WeierstrassCurve& E);

/// Norm of a + b θ + c θ² in K (exact).
Int element_norm(const CubicField& K, const Int& a, const Int& b, const Int& c);

} // namespace moddeg2::cubicfield

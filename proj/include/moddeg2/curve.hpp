#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace moddeg2::curve {

using Int = boost::multiprecision::cpp_int;

/// A nonsingular Weierstrass model over Q with its standard derived
/// invariants.  Coefficients are exact integers of arbitrary size so that
/// twists never overflow.
struct WeierstrassCurve {
    Int a1, a2, a3, a4, a6;
    Int b2, b4, b6, b8;
    Int c4, c6;
    Int disc;
    Int j_num, j_den; // j = j_num/j_den in lowest terms, j_den > 0
};

WeierstrassCurve derive_invariants(const Int& a1, const Int& a2, const Int& a3,
                                   const Int& a4, const Int& a6);
WeierstrassCurve derive_invariants(const std::array<std::int64_t, 5>& a);

/// The 2-division cubic in monic integral form: y^3 + b2 y^2 + 8 b4 y + 16 b6
/// (y = 4x).  Its roots generate Q(E[2]) over the x-line.
struct TwoTorsionInfo {
    std::array<Int, 3> cubic; // (c2, c1, c0) for y^3 + c2 y^2 + c1 y + c0
    bool has_rational_root = false;
    Int cubic_disc;
};

TwoTorsionInfo two_torsion_info(const WeierstrassCurve& E);

/// E(R) is connected iff disc < 0.
bool is_real_connected(const WeierstrassCurve& E);

/// a_p = p + 1 - #E(F_p) by direct enumeration; requires good reduction at p
/// for the supplied model.
std::int64_t ap_point_count(const WeierstrassCurve& E, std::uint64_t p);

/// a_2 ≡ 0 mod 2, for curves with good reduction at 2.
bool is_supersingular_at_2(const WeierstrassCurve& E);

/// CM discriminant when j matches one of the thirteen rational CM
/// j-invariants, else absent.
std::optional<int> cm_discriminant(const WeierstrassCurve& E);

/// The quadratic twist by squarefree d != 0, as the model
/// y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6.
WeierstrassCurve quadratic_twist(const WeierstrassCurve& E, std::int64_t d);

/// Cheap non-minimality screen: some prime p <= 1000 has p^12 | disc and
/// p^4 | c4.  (Full minimization is out of scope; database models are
/// assumed minimal.)
bool possibly_non_minimal(const WeierstrassCurve& E);

/// Integral model with invariants (c4, c6), when one exists (Kraus'
/// conditions at 2 and 3).  Used to normalize searched models.
std::optional<WeierstrassCurve> curve_from_c4c6(const Int& c4, const Int& c6);

std::string ainvs_string(const WeierstrassCurve& E);

/// All integer roots of y^3 + c[0] y^2 + c[1] y + c[2], exactly.
std::vector<Int> monic_cubic_integer_roots(const std::array<Int, 3>& c);

} // namespace moddeg2::curve

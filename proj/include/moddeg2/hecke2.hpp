#pragma once

#include "moddeg2/linalg.hpp"
#include "moddeg2/modsym.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moddeg2::hecke2 {

using linalg::Int;
using linalg::Mat64;
using linalg::MatF2;
using linalg::PolyF2;

/// The cuspidal Hecke algebra T as a Z-lattice: a Hermite basis of the span
/// of {T_n : n <= Sturm bound} inside End(H1), its structure constants mod 2,
/// and the coordinates of every T_n in that basis.
struct HeckeLattice {
    std::int64_t N = 0;
    int sturm = 0;
    int coeff_bound = 0; // coordinates stored for n up to this (>= sturm)
    int rank = 0;
    // exact basis matrices; populated when the lattice is built exactly
    // (small levels and verification runs)
    std::vector<Mat64> basis;
    // mod-2 reductions of the basis matrices (always available)
    std::vector<MatF2> basis_mod2;
    std::vector<std::vector<Int>> tn_coords;     // T_n in basis coordinates, n = 1..coeff_bound
    // structure constants mod 2: row (i*rank + j) holds coords of b_i * b_j
    MatF2 mul_table;
    std::vector<bool> unit;                      // coordinates of T_1 mod 2

    /// coords of b_i * x for x in A = T/2T.
    std::vector<bool> multiply(const std::vector<bool>& x, const std::vector<bool>& y) const;
    std::vector<bool> tn_mod2(std::int64_t n) const;
};

/// Build the lattice from {T_n : n <= B}; with verify_doubled, recompute with
/// bound 2B and require the same lattice.
HeckeLattice hecke_lattice(const modsym::ManinSymbolSpace& space, bool verify_doubled = false);

/// The image of one T_n in the residue field of a local factor: either an
/// element of F2 or (for larger residue fields) its minimal polynomial.
struct ResidueValue {
    bool in_f2 = true;
    bool f2_value = false;
    PolyF2 minpoly; // over F2, when in_f2 is false
};

/// One local factor of T ⊗ F2.
struct LocalFactorMod2 {
    int d_m = 0;           // dimension over F2
    int residue_degree = 0; // k with residue field F_{2^k}
    bool eisenstein = false;
    MatF2 block_basis;      // d_m x rank, rows span the factor inside A
    MatF2 nil_basis;        // basis of the nilradical of the factor
    std::vector<bool> idempotent; // identity of the factor, in A-coordinates
    std::map<std::int64_t, ResidueValue> prime_images; // l -> image of T_l, prime l <= B
};

/// Complete decomposition of the Artinian algebra T/2T into local factors.
/// Deterministic: generator splitting in increasing prime order, then
/// Frobenius-fixed-space idempotent refinement.
std::vector<LocalFactorMod2> decompose_mod2(const HeckeLattice& lattice);

/// Image of T_n in the factor's residue field.
ResidueValue eigensystem_coefficient(const HeckeLattice& lattice, const LocalFactorMod2& factor,
                                     std::int64_t n);

enum class TmVerdict {
    IsZ2,              // T_m = Z_2
    BiggerByDimension, // residue field F2 but d_m >= 2
    ResidueFieldTooLarge,
};

TmVerdict tm_verdict(const LocalFactorMod2& factor);
inline bool tm_equals_z2(const LocalFactorMod2& factor) { return tm_verdict(factor) == TmVerdict::IsZ2; }

/// First sturm coefficients of a mod-2 q-expansion.
struct QexpPrefix {
    std::vector<bool> an; // an[i] = a_{i+1}
};

/// For factors with d_m >= 2: two distinct nonzero q-expansion prefixes
/// annihilated by m^2, verified by direct multiplication.  Absent when
/// d_m = 1.
std::optional<std::pair<QexpPrefix, QexpPrefix>>
lemma_local_witness(const HeckeLattice& lattice, const LocalFactorMod2& factor);

enum class ReductionKind { Ordinary, Supersingular };

struct ResidualClass {
    ReductionKind kind;
    int n_mod_8;
    std::string implied; // field consequence of the supersingular case
};

/// Ordinary/supersingular dichotomy of a non-Eisenstein residue-degree-1
/// factor at prime level, with the N mod 8 field consequence.
ResidualClass classify_residual(const LocalFactorMod2& factor, std::int64_t N);

/// Line-oriented text dump of the mod-2 structure constants (stable order).
std::string dump_structure(const HeckeLattice& lattice);

} // namespace moddeg2::hecke2

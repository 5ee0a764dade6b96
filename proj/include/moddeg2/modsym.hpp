#pragma once

#include "moddeg2/linalg.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

namespace moddeg2::modsym {

using linalg::Int;
using linalg::Mat64;

/// Canonical representatives of P^1(Z/N), ordered lexicographically by
/// (c, d).  Normalization cost is O(gcd(c,N)) per call.
class P1 {
  public:
    explicit P1(std::int64_t N);

    std::int64_t level() const { return N_; }
    int size() const { return static_cast<int>(reps_.size()); }
    std::pair<std::int64_t, std::int64_t> rep(int idx) const { return reps_[idx]; }

    /// Canonical form of (c:d); second member false if gcd(c,d,N) > 1.
    std::pair<std::pair<std::int64_t, std::int64_t>, bool>
    normalize(std::int64_t c, std::int64_t d) const;

    /// Index of (c:d), or -1 when the pair is not in P^1.
    int index(std::int64_t c, std::int64_t d) const;

  private:
    std::int64_t N_;
    std::vector<std::pair<std::int64_t, std::int64_t>> reps_;
    std::unordered_map<std::int64_t, int> lookup_;
};

/// A point of P^1(Q): num/den reduced, den >= 0, infinity = 1/0.
struct Cusp {
    Int num;
    Int den;
};

/// Weight-2 modular symbols for Gamma0(N): the Manin presentation over Q
/// with a saturated integral structure, the boundary map, and the cuspidal
/// sublattice.  Hecke, Atkin-Lehner and star operators act as integer
/// matrices on the cuspidal lattice basis.
class ManinSymbolSpace {
  public:
    static ManinSymbolSpace build(std::int64_t N);

    std::int64_t level() const { return N_; }
    int dim() const { return dim_; }
    int cuspidal_dim() const { return cuspidal_.rank(); }
    int genus() const { return cuspidal_.rank() / 2; }
    int cusp_count() const { return cusp_count_; }
    std::int64_t index_mu() const { return mu_; }
    int sturm_bound() const { return static_cast<int>((mu_ + 5) / 6); }

    const linalg::HnfBasis& cuspidal_basis() const { return cuspidal_; }

    /// T_n (U_q-part included for gcd(n, N) > 1) on the cuspidal basis.
    Mat64 hecke_matrix(std::int64_t n) const;

    /// W_Q for an exact divisor Q of N; W_Q^2 = identity.
    Mat64 atkin_lehner_matrix(std::int64_t Q) const;

    /// Star involution (complex conjugation).
    Mat64 star_matrix() const;

    /// Coordinates in the full lattice L of the class of the path {a, b}.
    std::vector<std::int64_t> path_coords(const Cusp& a, const Cusp& b) const;

    /// Apply T_n to a single vector in cuspidal coordinates (big-int safe);
    /// cheaper than building the full matrix when n is large.
    std::vector<Int> hecke_apply(std::int64_t n, const std::vector<Int>& v) const;

    const P1& p1() const { return p1_; }
    const std::vector<std::vector<std::pair<int, std::int64_t>>>& symbol_coords() const {
        return symbol_coords_;
    }

  private:
    ManinSymbolSpace(std::int64_t N);

    Mat64 operator_on_lattice(const std::function<std::vector<std::int64_t>(int)>& image_of_symbol) const;
    Mat64 restrict_to_cuspidal(const Mat64& on_lattice) const;
    Mat64 hecke_prime_power(std::int64_t p, int e) const;
    Mat64 hecke_prime(std::int64_t p) const;
    std::vector<std::int64_t> symbol_column(int idx) const;
    std::vector<std::int64_t> manin_path_coords(const Cusp& a, const Cusp& b) const;

    std::int64_t N_;
    P1 p1_;
    int dim_ = 0;
    int cusp_count_ = 0;
    std::int64_t mu_ = 0;
    // sparse integer coordinates of each Manin symbol in the lattice basis
    std::vector<std::vector<std::pair<int, std::int64_t>>> symbol_coords_;
    // P1 indices of the free generators (the quotient basis over Q)
    std::vector<int> free_symbol_;
    // lattice basis rows in scaled free-symbol coordinates, denominator den_all_
    std::vector<std::vector<Int>> lattice_rows_;
    Int den_all_ = 1;
    linalg::HnfBasis cuspidal_{0};
    mutable std::map<std::int64_t, Mat64> hecke_cache_;
    mutable std::unique_ptr<std::mutex> cache_mutex_;
};

inline ManinSymbolSpace build_space(std::int64_t N) { return ManinSymbolSpace::build(N); }

enum class RankParity { Even, Odd };

/// A 1-dimensional rational eigenspace on the +1 star component, stored as a
/// primitive integer vector in cuspidal coordinates.
struct EigenLine {
    std::vector<Int> coords;
};

/// Intersect kernels of T_l - a_l over good primes l up to the Sturm bound
/// on the +1 star eigenspace.  Throws std::runtime_error when the
/// intersection is 0-dimensional or >= 2-dimensional.
EigenLine locate_eigenform(const ManinSymbolSpace& space,
                           const std::function<std::int64_t(std::int64_t)>& ap_of_prime);

/// Odd analytic rank iff W_N fixes the eigenline.
RankParity analytic_rank_parity(const ManinSymbolSpace& space, const EigenLine& line);

/// Genus of X0(N) by the standard index/elliptic-point/cusp formula.
std::int64_t genus_x0(std::int64_t N);
std::int64_t gamma0_index(std::int64_t N);
std::int64_t cusp_number(std::int64_t N);

} // namespace moddeg2::modsym
